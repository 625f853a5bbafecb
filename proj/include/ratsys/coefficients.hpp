#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ratsys/scalar.hpp"

namespace ratsys {

struct ConstantCoefficients {
    Rational value;
};

struct PeriodicCoefficients {
    std::vector<Rational> values;
};

/// lo + k (hi - lo) / 2^resolution_bits with k in [0, 2^resolution_bits]
/// drawn deterministically from (seed, n).
struct SeededUniformCoefficients {
    Rational lo;
    Rational hi;
    std::uint64_t seed = 0;
    unsigned resolution_bits = 16;
};

/// gamma_i = values[i]; no wrap-around past the end.
struct FileCoefficients {
    std::vector<Rational> values;
};

/// The sequence gamma_n, n >= -1, with gamma_{-1} = gamma_0.
class CoefficientSequence {
public:
    using Kind = std::variant<ConstantCoefficients, PeriodicCoefficients, SeededUniformCoefficients, FileCoefficients>;

    static CoefficientSequence constant(Rational g);
    static CoefficientSequence periodic(std::vector<Rational> values);
    static CoefficientSequence seeded_uniform(Rational lo, Rational hi, std::uint64_t seed, unsigned resolution_bits = 16);
    static CoefficientSequence from_values(std::vector<Rational> values);

    /// Reads one scalar per line (blank lines and '#' comments skipped).
    static CoefficientSequence from_file(const std::filesystem::path& path);

    /// Parses "const:G", "periodic:G1,G2,...", "uniform:LO:HI:seed=S[:bits=B]"
    /// or "file:PATH".
    static CoefficientSequence parse(std::string_view spec);

    /// gamma_n; n = -1 yields gamma_0.
    Rational at(std::int64_t n) const;

    /// Largest n for which at(n) is defined, or -1 for unbounded sequences.
    std::int64_t last_index() const;

    const Kind& kind() const noexcept { return kind_; }

    /// Round-trippable textual form (as accepted by parse, except FromFile
    /// which prints its inline length).
    std::string describe() const;

private:
    explicit CoefficientSequence(Kind k);
    Kind kind_;
};

inline Rational gamma_at(const CoefficientSequence& seq, std::int64_t n) { return seq.at(n); }

/// 64-bit mix of (seed, stream) used for every seeded draw in the project.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

} // namespace ratsys
