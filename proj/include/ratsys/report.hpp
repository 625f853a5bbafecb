#pragma once

#include <string>

#include <json.hpp>

namespace ratsys {

using Json = nlohmann::ordered_json;

/// Verdict of one identity or bound suite. `worst_residual` is a
/// text-serialized scalar; `witness` names the index (i, n, k, trial, ...)
/// of the worst case.
struct VerificationReport {
    std::string suite;
    Json parameters = Json::object();
    bool pass = true;
    std::string worst_residual = "0";
    Json witness = Json::object();
    Json metrics = Json::object();

    Json to_json() const;
    static VerificationReport from_json(const Json& j);
};

/// Stable serialization used for every report file: two-space indent,
/// trailing newline.
std::string dump(const Json& j);

/// Human-readable rendering of a report file (single report, array of
/// reports, or a sweep aggregate).
std::string pretty_print(const Json& j);

} // namespace ratsys
