// Small tour of the angle machinery: the two computation paths, the
// singular class, and a branch membership query.

#include <cstdio>

#include "dslkit/angles.hpp"
#include "dslkit/subequations.hpp"
#include "dslkit/suites.hpp"

using namespace dslkit;

int main() {
    // A 2+1 dimensional quadratic Hessian: one steep spatial direction,
    // one shallow negative one, small positive time curvature.
    const SpaceTimeMatrix A = golden_quadratic_hessian(2, 0.1, 0.1, 1.0);

    const AngleValue spectral = spacetime_angle_spectral(A);
    const AngleValue schur = spacetime_angle_schur(A);
    const AngleValue both = spacetime_angle(A);
    std::printf("spectral path : %+.15f\n", spectral.radians);
    std::printf("schur path    : %+.15f\n", schur.radians);
    std::printf("dispatcher    : %+.15f  (interval width %.2e)\n", both.radians,
                both.certified_interval ? (*both.certified_interval)[1] - (*both.certified_interval)[0]
                                        : 0.0);

    // Membership just at the branch boundary.
    const DslBranch b(2, kHalfPi + 0.1);
    std::printf("member of branch c = pi/2 + 0.1: %s\n", in_Fcal(A, b) ? "yes" : "no");

    // The singular class uses the one-sided defining value.
    SpaceTimeMatrix S(2);
    S.a_plus(0, 0) = 1.0;
    S.a_plus(1, 1) = -0.5;
    const AngleValue sv = spacetime_angle(S);
    std::printf("singular-class value: %+.15f (path %s)\n", sv.radians, to_string(sv.path));
    return 0;
}
