// Dicke state VCM against its closed form, and the maximally fluctuating operator.
#include "magnon/magnon.hpp"

#include <cstdio>

using namespace magnon;

int main()
{
    const int n = 8;
    const int m = 4;
    const auto state = core::dicke_state(n, m);
    const auto v = vcm::build_vcm(state);
    const auto ref = oracle::dicke_vcm_entries(n, m);

    std::printf("N=%d m=%d\n", n, m);
    std::printf("V(x1,x2) = %.12f   closed form %.12f\n", v(vcm::Pauli::x, 1, vcm::Pauli::x, 2).real(),
                ref(vcm::Pauli::x, 1, vcm::Pauli::x, 2).real());
    std::printf("V(z1,z2) = %.12f   closed form %.12f\n", v(vcm::Pauli::z, 1, vcm::Pauli::z, 2).real(),
                ref(vcm::Pauli::z, 1, vcm::Pauli::z, 2).real());
    std::printf("trace    = %.12f\n", v.trace());

    const auto top = vcm::max_eigen(v);
    std::printf("e_max    = %.12f   closed form %.12f   multiplicity %d\n", top.value, oracle::dicke_emax(n, m),
                top.multiplicity);

    const auto raising = oracle::dicke_top_operator(n);
    const double fl = vcm::additive_fluctuation(state, raising);
    std::printf("<dA+ dA> for sum sigma_+ (|c|^2 = N): %.12f = N e_max\n", fl);

    const auto parts = vcm::hermitian_parts(raising);
    std::printf("hermitian parts: %.12f and %.12f\n", vcm::fluctuation(state, parts.real_part),
                vcm::fluctuation(state, parts.imaginary_part));
}
