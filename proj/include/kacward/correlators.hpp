#pragma once

#include <array>
#include <span>
#include <vector>

#include "kacward/geometry.hpp"
#include "kacward/kac_ward.hpp"

namespace kw {

struct ResolventKernel {
  EdgeMatrix g;   // (1 - KW)^{-1}
  EdgeMatrix kw;  // K W
  double residual = 0.0;   // max |(1 - KW) G - I|
  double condition = 0.0;  // 1-norm condition number
};

inline constexpr double kMaxResolventCondition = 1e12;

ResolventKernel resolvent(const KacWardMatrix& k, std::span<const double> w);
// max |G - KW G - I|
double dirac_residual(const ResolventKernel& r);
// max |w_{e2} G(rev e2, rev e1) - w_{e1} conj G(e1, e2)|
double conjugation_residual(const ResolventKernel& r, std::span<const double> w);

// Sum over non-backtracking paths e1 -> e2 of length <= max_len of the phase and weight
// products, accumulated by propagation over successors.
cplx path_expansion_G(const FaithfulProjection& proj, std::span<const double> w, int e1, int e2, int max_len);

struct OrderDisorderPair {
  int site = 0;
  Point2 star;  // disorder endpoint inside a face adjacent to the site
};

struct TwoPointResult {
  double value = 0.0;
  double theta = 0.0;      // total turning of the joined line from x2 to x1
  double imag_part = 0.0;
  Polyline line;           // x2, x2*, ..., x1*, x1
};

// <mu_1 mu_2> for spins x1, x2 joined by the disorder line `middle` running from x2* to x1*.
TwoPointResult order_disorder_two_point(const FaithfulProjection& proj, std::span<const double> w,
                                        const ResolventKernel& g, int x1, int x2, const Polyline& middle);

// Straight x2*-x1* link; bends around vertices closer than eps.
Polyline straight_link(const FaithfulProjection& proj, const OrderDisorderPair& p1, const OrderDisorderPair& p2);

// Full disorder line x2 -> x2* -> ... -> x1* -> x1 used for the oracle side of a two-point function.
Polyline joined_line(const FaithfulProjection& proj, int x1, int x2, const Polyline& middle);

// Oracle value: signed sum with boundary {x1, x2} and the joined line, over Z~.
double oracle_two_point(const FaithfulProjection& proj, std::span<const double> w, int x1, int x2,
                        const Polyline& middle);

struct DotsenkoPlacement {
  int edge = 0;
  int a = 0;      // origin vertex of the edge
  int b = 0;      // terminal vertex
  Point2 p;       // endpoint reached directly from x0*
  Point2 q;       // endpoint across the edge, reached by a hop p -> q
};

// Places p and q in the two faces on either side of a straight edge, p on the side facing x0*.
DotsenkoPlacement dotsenko_placement(const FaithfulProjection& proj, int edge, Point2 x0_star);

struct DotsenkoResult {
  std::array<double, 4> chi{};
  double w_e = 0.0;
  double residual_1 = 0.0;  // |W (chi1 + chi4) - (chi2 - chi3)|
  double residual_2 = 0.0;  // |W (chi2 + chi3) - (chi1 - chi4)|
};

DotsenkoResult dotsenko_check(const FaithfulProjection& proj, std::span<const double> w,
                              const ResolventKernel& g, const DotsenkoPlacement& placement,
                              const OrderDisorderPair& mu0);

double dual_weight(double w);

// Pfaffian by expansion along the first row; rows <= 12.
double pfaffian(const Eigen::MatrixXd& a);

struct PfaffianCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  Eigen::MatrixXd pair_values;
};

// Lines run straight from each x_j* to x0*; pairs must be listed in cyclic order around x0*.
PfaffianCheck pfaffian_correlation_check(const FaithfulProjection& proj, std::span<const double> w,
                                         const ResolventKernel& g, std::span<const OrderDisorderPair> pairs,
                                         Point2 x0_star);

}  // namespace kw
