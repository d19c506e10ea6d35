#pragma once

namespace jamlab {

// First-order Marcum Q function: Q1(a, b) = P(R > b) for R Rician with
// noncentrality a, equivalently the survival function of a noncentral
// chi-square with 2 dof and noncentrality a^2 evaluated at b^2.
//
// Series implementation (Poisson mixture of Poisson CDFs), accurate to
// ~1e-14 absolute for a^2/2 and b^2/2 below ~650. Beyond that range the
// exponentials underflow and a normal-tail fallback is used; detection
// probabilities saturate long before then, so solver code never hits it.
double marcum_q1(double a, double b);

}  // namespace jamlab
