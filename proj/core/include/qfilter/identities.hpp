#pragma once

// Randomized identity suites for conditioning and the Itô algebra. Each check
// reports the worst residual over its random instances; the caller decides
// the tolerance.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qfilter/model.hpp"
#include "qfilter/random.hpp"

namespace qfilter {

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    int instances = 0;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    int instances = 100;
    std::vector<int> dims;
};

/// Random model with Haar S, Ginibre L and Gaussian Hermitian H.
HPModel random_model(int dim, Rng& rng);

/// Conditioning checks. Default dims {2, 4, 8}:
///   qprob.defining_property, qprob.projection, qprob.least_squares,
///   qprob.rotation, qprob.bayes.
std::vector<IdentityCheck> run_qprob_suite(const SuiteOptions& options);

/// Itô-algebra checks over random models and coherent amplitudes.
/// Default dims {2, 3, 4}.
std::vector<IdentityCheck> run_ito_suite(const SuiteOptions& options);

/// Residual of the quadrature innovation gain against the filter step's
/// response to dY: tr(X (step(dY = +e) - step(dY = -e))) / 2e.
double quadrature_gain_duality(const HPModel& m, complex beta, const ComplexMatrix& rho, const ComplexMatrix& x);

/// Residual of the counting innovation gain against the difference between
/// the click and no-click branches of the filter step over a vanishing dt.
double counting_gain_duality(const HPModel& m, complex beta, const ComplexMatrix& rho, const ComplexMatrix& x);

/// One line per check: "name residual PASS|FAIL". Returns true if every
/// residual is within `tolerance`.
bool write_report(std::ostream& out, const std::vector<IdentityCheck>& checks, double tolerance);

}  // namespace qfilter
