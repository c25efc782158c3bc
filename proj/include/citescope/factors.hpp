#ifndef CITESCOPE_FACTORS_HPP
#define CITESCOPE_FACTORS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "citescope/environment.hpp"

namespace citescope {

// Pearson correlations between the members' citing-pattern vectors: each
// variable is one citing journal's row of env.sub_matrix, the observations
// are the cited columns. Exactly symmetric with unit diagonal.
Eigen::MatrixXd correlation_matrix(const Environment& env);

struct PcaResult {
    Eigen::VectorXd eigenvalues;  // all p, descending
    Eigen::MatrixXd loadings;     // p x k, column c = eigenvector_c * sqrt(eigenvalue_c)
};

// Principal components of a correlation matrix. `components` empty applies
// the Kaiser criterion (eigenvalues strictly > 1). Each loading column is
// flipped so its largest-magnitude entry is positive.
PcaResult principal_components(const Eigen::MatrixXd& correlation,
                               std::optional<int> components = std::nullopt);

struct VarimaxResult {
    Eigen::MatrixXd loadings;                // rotated, p x k
    Eigen::MatrixXd rotation;                // k x k orthogonal, rotated = input * rotation
    int iterations_used = 0;                 // full sweeps over column pairs
    bool converged = true;
    std::vector<double> criterion_history;   // value before sweep 1, then after each sweep
};

// Varimax rotation by pairwise planar rotations with the closed-form optimal
// angle. With kaiser_normalize, rows are scaled to unit communality before
// rotation and unscaled after. Stops when the criterion's relative change
// drops below `tolerance` or after max_iterations sweeps (then converged is
// false). k <= 1 returns the identity rotation with the loadings unchanged;
// for k >= 2 the sign convention (largest-magnitude entry positive per
// column) is applied to the result and folded into the rotation matrix.
VarimaxResult varimax_rotate(const Eigen::MatrixXd& loadings, bool kaiser_normalize = true,
                             double tolerance = 1e-6, int max_iterations = 100);

// The varimax criterion: sum over columns of the variance of squared loadings.
double varimax_criterion(const Eigen::MatrixXd& loadings);

/// Full factor solution for an environment's citing patterns.
struct FactorModel {
    std::vector<std::string> variables;   // member journals, row order
    Eigen::MatrixXd correlation;          // p x p
    Eigen::VectorXd eigenvalues;          // all p, descending
    Eigen::MatrixXd loadings_unrotated;   // p x k
    Eigen::MatrixXd loadings_rotated;     // p x k
    Eigen::MatrixXd rotation;             // k x k
    double variance_explained_total = 0.0;  // (sum of first k eigenvalues) / p
    int iterations_used = 0;
    bool rotation_converged = true;
};

struct FactorOptions {
    std::optional<int> components;  // empty = Kaiser criterion
    bool kaiser_normalize = true;
    double tolerance = 1e-6;
    int max_iterations = 100;
};

FactorModel fit_factor_model(const Environment& env, const FactorOptions& options = {});

// Aligned plain-text rotated-loadings table; entries with |loading| below
// display_cutoff are left blank. Model values are untouched.
std::string format_loadings_table(const FactorModel& model, double display_cutoff = 0.1);

}  // namespace citescope

#endif
