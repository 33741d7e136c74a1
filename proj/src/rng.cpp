#include "pglab/rng.hpp"

#include "pglab/error.hpp"

#include <algorithm>
#include <array>

namespace pglab::rng {

double beta_int(Stream& s, int a, int b) {
    if (a < 1 || b < 1 || a + b - 1 > 16)
        throw input_error("beta_int: shapes must be integers in [1, 16] with a+b-1 <= 16");
    std::array<double, 16> u{};
    const int k = a + b - 1;
    for (int i = 0; i < k; ++i) u[std::size_t(i)] = s.next_unit();
    std::nth_element(u.begin(), u.begin() + (a - 1), u.begin() + k);
    return u[std::size_t(a - 1)];
}

} // namespace pglab::rng
