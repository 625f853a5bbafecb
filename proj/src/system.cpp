#include "ratsys/system.hpp"

namespace ratsys {

AnyOrbit evolve_any(const Rational& x0, const Rational& y0, const CoefficientSequence& seq, std::int64_t steps,
                    const NumericMode& mode) {
    if (mode.is_exact()) return evolve<Rational>(x0, y0, seq, steps, mode);
    return evolve<Real>(x0, y0, seq, steps, mode);
}

void write_csv(std::ostream& out, const AnyOrbit& orbit) {
    std::visit([&out](const auto& o) { write_csv(out, o); }, orbit);
}

} // namespace ratsys
