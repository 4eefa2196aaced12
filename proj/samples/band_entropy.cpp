// Half-chain entropy of band states (distinct wavenumbers 0, +1, -1, ...) and a linear fit.
#include "magnon/magnon.hpp"

#include <cstdio>

using namespace magnon;

int main()
{
    fit::ScalingSeries series("band m=N/2");
    for (int n = 4; n <= 16; n += 2) {
        const auto state = core::band_state(n, n / 2);
        const auto schmidt = entanglement::schmidt_spectrum(state, entanglement::BipartiteCut::half(n));
        std::printf("N=%2d  S=%.6f bits  rank=%d\n", n, schmidt.entropy(), schmidt.rank());
        series.add(n, schmidt.entropy());
    }
    const auto f = fit::linear_fit(series);
    std::printf("S = aN + b:  a=%.4f +- %.4f  b=%.4f +- %.4f\n", f.slope, f.slope_error, f.intercept,
                f.intercept_error);
}
