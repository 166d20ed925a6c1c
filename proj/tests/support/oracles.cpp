#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace oracle {

namespace {

const cd I{0.0, 1.0};

Mat tidy(const Mat& rho) {
    Mat out = 0.5 * (rho + rho.adjoint());
    return out / out.trace().real();
}

}  // namespace

Mat sigma_minus() {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

Mat excited() {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0;
    return m;
}

Mat ground() {
    Mat m = Mat::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

Mat vacuum_homodyne_step(const Mat& rho, const Mat& c, const Mat& h, double dy, double dt) {
    const Mat cd_c = c.adjoint() * c;
    const double m = ((c + c.adjoint()) * rho).trace().real();
    const Mat lindblad = -I * (h * rho - rho * h) + c * rho * c.adjoint() - 0.5 * (cd_c * rho + rho * cd_c);
    const Mat gain = c * rho + rho * c.adjoint() - m * rho;
    return tidy(rho + lindblad * dt + gain * (dy - m * dt));
}

Mat vacuum_jump_step(const Mat& rho, const Mat& c, const Mat& h, int dn, double dt) {
    Mat state = rho;
    if (dn == 1) {
        const Mat jumped = c * rho * c.adjoint();
        state = jumped / jumped.trace().real();
    }
    const Mat cd_c = c.adjoint() * c;
    const double rate = (cd_c * state).trace().real();
    const Mat drift = -I * (h * state - state * h) - 0.5 * (cd_c * state + state * cd_c) + rate * state;
    return tidy(state + drift * dt);
}

Mat von_neumann(const Mat& rho0, const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    const Mat& v = eig.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) phases(k) = std::exp(-I * eig.eigenvalues()(k) * t);
    const Mat u = v * phases.asDiagonal() * v.adjoint();
    return u * rho0 * u.adjoint();
}

double decay_population(double gamma, double t) { return std::exp(-gamma * t); }

double no_jump_population(double p0, double gamma, double t) {
    const double survive = p0 * std::exp(-gamma * t);
    return survive / (survive + 1.0 - p0);
}

double riccati_no_noise(double p0, double c, double t) { return p0 / (1.0 + c * c * p0 * t); }

double ou_mean(double a, double x0, double t) { return x0 * std::exp(a * t); }

double ou_variance(double a, double sigma, double t) {
    return sigma * sigma * (std::exp(2.0 * a * t) - 1.0) / (2.0 * a);
}

double poisson_gof_pvalue(const std::vector<int>& counts, double mean) {
    std::map<int, int> observed;
    for (int c : counts) ++observed[c];
    const double n = static_cast<double>(counts.size());
    const boost::math::poisson_distribution<double> law(mean);

    // Bins {0..k0}, {k0+1}, ..., {k1..inf}; inner bins expect >= 5 samples.
    struct Bin {
        double expected = 0.0;
        double observed = 0.0;
    };
    std::vector<Bin> bins;
    Bin current;
    const int top = static_cast<int>(std::ceil(mean + 20.0 * std::sqrt(mean) + 20.0));
    for (int k = 0; k <= top; ++k) {
        current.expected += n * boost::math::pdf(law, k);
        current.observed += observed.count(k) ? observed[k] : 0;
        if (current.expected >= 5.0) {
            bins.push_back(current);
            current = {};
        }
    }
    // Tail beyond `top` plus any unfinished bin joins the last bin.
    double beyond = 0.0;
    for (const auto& [k, c] : observed) {
        if (k > top) beyond += c;
    }
    current.expected += n * boost::math::cdf(boost::math::complement(law, top));
    current.observed += beyond;
    if (bins.empty()) return 1.0;
    bins.back().expected += current.expected;
    bins.back().observed += current.observed;
    if (bins.size() < 2) return 1.0;

    double stat = 0.0;
    for (const auto& b : bins) stat += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
    const boost::math::chi_squared_distribution<double> chi(static_cast<double>(bins.size() - 1));
    return boost::math::cdf(boost::math::complement(chi, stat));
}

double trace_distance(const Mat& a, const Mat& b) {
    const Mat diff = a - b;
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (diff + diff.adjoint()));
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace oracle
