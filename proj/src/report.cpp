#include "ratsys/report.hpp"

#include <sstream>

namespace ratsys {

Json VerificationReport::to_json() const {
    Json j;
    j["suite"] = suite;
    j["parameters"] = parameters;
    j["pass"] = pass;
    j["worst_residual"] = worst_residual;
    j["witness"] = witness;
    if (!metrics.empty()) j["metrics"] = metrics;
    return j;
}

VerificationReport VerificationReport::from_json(const Json& j) {
    VerificationReport r;
    r.suite = j.at("suite").get<std::string>();
    r.parameters = j.value("parameters", Json::object());
    r.pass = j.at("pass").get<bool>();
    r.worst_residual = j.value("worst_residual", std::string("0"));
    r.witness = j.value("witness", Json::object());
    r.metrics = j.value("metrics", Json::object());
    return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void print_fields(std::ostringstream& out, const Json& obj, const std::string& indent) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (it.value().is_object()) {
            out << indent << it.key() << ":\n";
            print_fields(out, it.value(), indent + "  ");
        } else {
            out << indent << it.key() << ": " << scalar_text(it.value()) << '\n';
        }
    }
}

void print_one(std::ostringstream& out, const Json& j) {
    if (j.contains("suite")) {
        out << (j.value("pass", false) ? "PASS" : "FAIL") << "  " << j["suite"].get<std::string>() << '\n';
        Json rest = j;
        rest.erase("suite");
        rest.erase("pass");
        print_fields(out, rest, "  ");
    } else {
        print_fields(out, j, "  ");
    }
}

} // namespace

std::string pretty_print(const Json& j) {
    std::ostringstream out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            out << "[" << i << "] ";
            print_one(out, j[i]);
        }
    } else if (j.is_object() && j.contains("cells")) {
        const Json& cells = j["cells"];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const Json& cell = cells[i];
            out << "cell " << i << ' ' << (cell.value("pass", false) ? "PASS" : "FAIL") << '\n';
            Json rest = cell;
            rest.erase("cell");
            rest.erase("pass");
            print_fields(out, rest, "  ");
        }
        if (j.contains("summary")) {
            out << "summary:\n";
            print_fields(out, j["summary"], "  ");
        }
    } else {
        print_one(out, j);
    }
    return out.str();
}

} // namespace ratsys
