#include "posmech/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace posmech {

GridDensity1D::GridDensity1D(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), n_(static_cast<int>(values.size())), f_(std::move(values)) {
    if (n_ < 2) throw std::invalid_argument("GridDensity1D: need at least 2 nodes");
    for (auto& v : f_)
        if (!(v > 0.0)) v = 0.0;
    // trapezoid mass per cell
    cum_.assign(n_, 0.0);
    for (int i = 1; i < n_; ++i) cum_[i] = cum_[i - 1] + 0.5 * (f_[i - 1] + f_[i]) * dx_;
    double total = cum_[n_ - 1];
    if (!(total > 0.0)) throw std::invalid_argument("GridDensity1D: zero total mass");
    for (auto& v : f_) v /= total;
    for (auto& v : cum_) v /= total;
}

double GridDensity1D::cdf(double x) const {
    if (x <= x0_) return 0.0;
    if (x >= x_max()) return 1.0;
    double u = (x - x0_) / dx_;
    int i = std::min(static_cast<int>(u), n_ - 2);
    double s = u - i;
    double fa = f_[i], fb = f_[i + 1];
    // integral of the linear density over [0, s] within the cell
    return cum_[i] + dx_ * (fa * s + 0.5 * (fb - fa) * s * s);
}

double GridDensity1D::sample(RngStream& rng) const {
    double u = rng.uniform();
    int lo = 0, hi = n_ - 1;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (cum_[mid] <= u ? lo : hi) = mid;
    }
    double rem = u - cum_[lo];
    double fa = f_[lo], fb = f_[lo + 1];
    double s;
    double slope = fb - fa;
    if (std::abs(slope) < 1e-300) {
        s = fa > 0 ? rem / (dx_ * fa) : 0.0;
    } else {
        // solve dx*(fa*s + slope*s^2/2) = rem for s in [0,1]
        double disc = fa * fa + 2.0 * slope * rem / dx_;
        s = (std::sqrt(std::max(disc, 0.0)) - fa) / slope;
    }
    s = std::clamp(s, 0.0, 1.0);
    return x0_ + (lo + s) * dx_;
}

double GridDensity1D::mean() const {
    double m = 0;
    for (int i = 0; i + 1 < n_; ++i) {
        double xa = x0_ + i * dx_, xb = xa + dx_;
        // exact first moment of the linear piece
        m += dx_ * ((f_[i] * (2 * xa + xb) + f_[i + 1] * (xa + 2 * xb)) / 6.0);
    }
    return m;
}

double GridDensity1D::variance() const {
    double mu = mean();
    double v = 0;
    for (int i = 0; i + 1 < n_; ++i) {
        double xa = x0_ + i * dx_ - mu, xb = xa + dx_;
        double fa = f_[i], fb = f_[i + 1];
        // integral of (fa + (fb-fa)s) * (xa + dx*s)^2 ds, s in [0,1]
        double c0 = fa, c1 = fb - fa;
        double i0 = xa * xa, i1 = 2 * xa * dx_, i2 = dx_ * dx_;
        v += dx_ * (c0 * (i0 + i1 / 2 + i2 / 3) + c1 * (i0 / 2 + i1 / 3 + i2 / 4));
        (void)xb;
    }
    return v;
}

double ks_distance(std::vector<double> samples, const GridDensity1D& ref) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = ref.cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / n - F));
        d = std::max(d, std::abs(i / n - F));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) * d;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_pvalue(double chi2, int dof) { return gamma_q(0.5 * dof, 0.5 * chi2); }

Histogram make_histogram(const std::vector<double>& samples, double lo, double hi, int bins) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.bins = bins;
    h.counts.assign(bins, 0);
    double w = bins / (hi - lo);
    for (double x : samples) {
        int i = static_cast<int>((x - lo) * w);
        if (x < lo || i >= bins) {
            ++h.out_of_range;
            continue;
        }
        ++h.counts[i];
        ++h.total;
    }
    h.mass.assign(bins, 0.0);
    if (h.total > 0)
        for (int i = 0; i < bins; ++i) h.mass[i] = static_cast<double>(h.counts[i]) / h.total;
    return h;
}

SampleMoments sample_moments(const std::vector<double>& xs) {
    SampleMoments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    double s = 0;
    for (double x : xs) s += x;
    m.mean = s / m.n;
    double v = 0, q = 0;
    for (double x : xs) {
        double d = x - m.mean;
        v += d * d;
        q += d * d * d * d;
    }
    m.variance = v / m.n;
    m.m4 = q / m.n;
    return m;
}

double SampleMoments::variance_se() const {
    if (n < 2) return 0;
    double v = (m4 - variance * variance) / n;
    return v > 0 ? std::sqrt(v) : 0.0;
}

}  // namespace posmech
