#include "fkdv/quadrature.hpp"

namespace fkdv {

QuadratureResult integrate_fn(const std::function<double(double)>& f, double a,
                              double b, QuadratureOptions opts) {
    return integrate(f, a, b, opts);
}

}  // namespace fkdv
