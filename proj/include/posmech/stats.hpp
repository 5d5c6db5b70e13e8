#pragma once

#include <cstdint>
#include <vector>

#include "posmech/grid.hpp"
#include "posmech/rng.hpp"

namespace posmech {

// Piecewise-linear density on a 1D axis (values at uniformly spaced nodes),
// with the matching piecewise-quadratic CDF. Used both as the sampling
// distribution for initial conditions and as the reference CDF for KS tests,
// so sampler and test agree exactly.
class GridDensity1D {
  public:
    GridDensity1D() = default;
    // nodes at x0 + i*dx, i in [0, n); density clamped at >= 0 and normalized.
    GridDensity1D(double x0, double dx, std::vector<double> values);

    double cdf(double x) const;
    double sample(RngStream& rng) const;
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * (n_ - 1); }
    double mean() const;
    double variance() const;

  private:
    double x0_ = 0, dx_ = 1;
    int n_ = 0;
    std::vector<double> f_;    // normalized node densities
    std::vector<double> cum_;  // cumulative mass up to node i
};

// Kolmogorov-Smirnov distance of samples against a reference CDF.
double ks_distance(std::vector<double> samples, const GridDensity1D& ref);

// Asymptotic Kolmogorov p-value for distance d on n samples.
double ks_pvalue(double d, std::size_t n);

// Upper regularized incomplete gamma Q(a, x); chi-square survival is
// Q(dof/2, chi2/2).
double gamma_q(double a, double x);
double chi2_pvalue(double chi2, int dof);

struct Histogram {
    double lo = 0, hi = 1;
    int bins = 0;
    std::vector<double> mass;      // normalized to sum 1 over in-range samples
    std::vector<int64_t> counts;
    int64_t total = 0, out_of_range = 0;
    double bin_center(int i) const { return lo + (i + 0.5) * (hi - lo) / bins; }
};

Histogram make_histogram(const std::vector<double>& samples, double lo, double hi, int bins);

struct SampleMoments {
    double mean = 0, variance = 0, m4 = 0;  // m4: 4th central moment
    std::size_t n = 0;
    // standard error of the sample variance
    double variance_se() const;
};
SampleMoments sample_moments(const std::vector<double>& xs);

}  // namespace posmech
