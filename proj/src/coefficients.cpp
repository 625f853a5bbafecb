#include "ratsys/coefficients.hpp"

#include <fstream>
#include <sstream>

namespace ratsys {

namespace {

void require_positive(const Rational& g, const char* what) {
    if (sgn(g) <= 0) throw InvalidCoefficient(std::string(what) + " must be positive, got " + to_text(g));
}

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

Rational parse_coefficient(std::string_view text) {
    Rational g = parse_rational(text);
    require_positive(g, "coefficient");
    return g;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
}

CoefficientSequence::CoefficientSequence(Kind k) : kind_(std::move(k)) {}

CoefficientSequence CoefficientSequence::constant(Rational g) {
    require_positive(g, "coefficient");
    return CoefficientSequence(ConstantCoefficients{std::move(g)});
}

CoefficientSequence CoefficientSequence::periodic(std::vector<Rational> values) {
    if (values.empty()) throw InvalidCoefficient("periodic sequence needs at least one value");
    for (const auto& g : values) require_positive(g, "coefficient");
    return CoefficientSequence(PeriodicCoefficients{std::move(values)});
}

CoefficientSequence CoefficientSequence::seeded_uniform(Rational lo, Rational hi, std::uint64_t seed,
                                                        unsigned resolution_bits) {
    require_positive(lo, "uniform lower bound");
    require_positive(hi, "uniform upper bound");
    if (hi < lo) throw InvalidCoefficient("uniform bounds reversed: " + to_text(lo) + " > " + to_text(hi));
    if (resolution_bits < 1 || resolution_bits > 62)
        throw InvalidCoefficient("uniform resolution must be in [1, 62] bits");
    return CoefficientSequence(SeededUniformCoefficients{std::move(lo), std::move(hi), seed, resolution_bits});
}

CoefficientSequence CoefficientSequence::from_values(std::vector<Rational> values) {
    if (values.empty()) throw InvalidCoefficient("coefficient file is empty");
    for (const auto& g : values) require_positive(g, "coefficient");
    return CoefficientSequence(FileCoefficients{std::move(values)});
}

CoefficientSequence CoefficientSequence::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open coefficient file: " + path.string());
    std::vector<Rational> values;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        values.push_back(parse_coefficient(line));
    }
    return from_values(std::move(values));
}

CoefficientSequence CoefficientSequence::parse(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("malformed coefficient spec: '" + std::string(spec) + "'");
    std::string_view kind = spec.substr(0, colon);
    std::string_view rest = spec.substr(colon + 1);

    if (kind == "const") return constant(parse_coefficient(rest));
    if (kind == "periodic") {
        std::vector<Rational> values;
        for (const auto& tok : split(rest, ',')) values.push_back(parse_coefficient(tok));
        return periodic(std::move(values));
    }
    if (kind == "file") return from_file(std::filesystem::path(std::string(rest)));
    if (kind == "uniform") {
        auto parts = split(rest, ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw std::invalid_argument("uniform spec is LO:HI:seed=S[:bits=B], got '" + std::string(spec) + "'");
        std::uint64_t seed = 0;
        unsigned bits = 16;
        bool have_seed = false;
        for (size_t i = 2; i < parts.size(); ++i) {
            const std::string& p = parts[i];
            try {
                if (p.rfind("seed=", 0) == 0) {
                    seed = std::stoull(p.substr(5));
                    have_seed = true;
                } else if (p.rfind("bits=", 0) == 0) {
                    bits = static_cast<unsigned>(std::stoul(p.substr(5)));
                } else {
                    throw std::invalid_argument("");
                }
            } catch (const std::logic_error&) {
                throw std::invalid_argument("bad uniform field '" + p + "' in '" + std::string(spec) + "'");
            }
        }
        if (!have_seed) throw std::invalid_argument("uniform spec needs seed=S: '" + std::string(spec) + "'");
        return seeded_uniform(parse_coefficient(parts[0]), parse_coefficient(parts[1]), seed, bits);
    }
    throw std::invalid_argument("unknown coefficient kind '" + std::string(kind) + "'");
}

Rational CoefficientSequence::at(std::int64_t n) const {
    if (n < -1) throw IndexOutOfRange("coefficient index " + std::to_string(n) + " < -1");
    if (n == -1) n = 0;
    return std::visit(
        [n](const auto& k) -> Rational {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ConstantCoefficients>) {
                return k.value;
            } else if constexpr (std::is_same_v<K, PeriodicCoefficients>) {
                return k.values[static_cast<size_t>(n) % k.values.size()];
            } else if constexpr (std::is_same_v<K, SeededUniformCoefficients>) {
                const std::uint64_t span = (std::uint64_t{1} << k.resolution_bits) + 1;
                const std::uint64_t step = mix_seed(k.seed, static_cast<std::uint64_t>(n)) % span;
                Rational g = k.hi - k.lo;
                g *= Rational(mpz_class(static_cast<unsigned long>(step)));
                g /= pow2(static_cast<long>(k.resolution_bits));
                g += k.lo;
                return g;
            } else {
                if (static_cast<size_t>(n) >= k.values.size())
                    throw IndexOutOfRange("coefficient file has " + std::to_string(k.values.size()) +
                                          " values; index " + std::to_string(n) + " requested");
                return k.values[static_cast<size_t>(n)];
            }
        },
        kind_);
}

std::int64_t CoefficientSequence::last_index() const {
    if (const auto* f = std::get_if<FileCoefficients>(&kind_)) return static_cast<std::int64_t>(f->values.size()) - 1;
    return -1;
}

std::string CoefficientSequence::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ConstantCoefficients>) {
                return "const:" + to_text(k.value);
            } else if constexpr (std::is_same_v<K, PeriodicCoefficients>) {
                std::string s = "periodic:";
                for (size_t i = 0; i < k.values.size(); ++i) s += (i ? "," : "") + to_text(k.values[i]);
                return s;
            } else if constexpr (std::is_same_v<K, SeededUniformCoefficients>) {
                return "uniform:" + to_text(k.lo) + ":" + to_text(k.hi) + ":seed=" + std::to_string(k.seed) +
                       ":bits=" + std::to_string(k.resolution_bits);
            } else {
                return "file:<" + std::to_string(k.values.size()) + " values>";
            }
        },
        kind_);
}

} // namespace ratsys
