#include "ratsys/sum_table.hpp"

namespace ratsys {

Rational mu(std::int64_t i, std::int64_t k, const CoefficientSequence& seq) {
    if (i < 0 || k < 1) throw IndexOutOfRange("mu needs i >= 0 and k >= 1");
    Rational product(1);
    for (std::int64_t j = i - 1; j <= i + k - 3; ++j) product *= seq.at(j);
    return product;
}

VerificationReport mu_decay_check(std::int64_t i_max, std::int64_t k_max, const CoefficientSequence& seq,
                                  const Rational& gamma_sup) {
    if (i_max < 0 || k_max < 1) throw IndexOutOfRange("mu_decay_check needs i_max >= 0 and k_max >= 1");
    if (sgn(gamma_sup) <= 0 || gamma_sup >= 1)
        throw RegimeMismatch("mu_decay_check needs 0 < gamma_sup < 1, got " + to_text(gamma_sup));

    // Every coefficient the table touches: gamma_{-1} .. gamma_{i_max + k_max - 3}.
    std::vector<Rational> gammas;
    for (std::int64_t j = -1; j <= i_max + k_max - 3; ++j) {
        Rational g = seq.at(j);
        if (g > gamma_sup)
            throw InvalidCoefficient("gamma_" + std::to_string(j) + " = " + to_text(g) + " exceeds declared bound " +
                                     to_text(gamma_sup));
        gammas.push_back(std::move(g));
    }
    auto gamma = [&](std::int64_t j) -> const Rational& { return gammas[static_cast<std::size_t>(j + 1)]; };

    VerificationReport report;
    report.suite = "mu-decay";
    report.parameters = {{"i_max", i_max}, {"k_max", k_max}, {"gamma_sup", to_text(gamma_sup)},
                         {"coefficients", seq.describe()}};

    const std::int64_t k_floor = k_max >= 3 ? 3 : 1;
    Rational max_ratio(0);
    std::int64_t wi = 0;
    std::int64_t wk = 1;
    bool within = true;
    bool all_saturated = true;
    std::int64_t saturated = 0;
    for (std::int64_t i = 0; i <= i_max; ++i) {
        Rational m(1);
        Rational envelope(1);
        for (std::int64_t k = 1; k <= k_max; ++k) {
            if (k >= 2) {
                m *= gamma(i + k - 3);
                envelope *= gamma_sup;
            }
            const Rational ratio = m / envelope;
            if (ratio > 1) {
                within = false;
                wi = i;
                wk = k;
            }
            if (ratio == 1)
                ++saturated;
            else
                all_saturated = false;
            if (k >= k_floor && ratio > max_ratio) {
                max_ratio = ratio;
                if (within) {
                    wi = i;
                    wk = k;
                }
            }
        }
    }
    report.pass = within;
    report.worst_residual = to_text(max_ratio);
    report.witness = {{"i", wi}, {"k", wk}};
    report.metrics = {{"max_ratio", to_text(max_ratio)},
                      {"saturated_cells", saturated},
                      {"all_saturated", all_saturated}};
    return report;
}

} // namespace ratsys
