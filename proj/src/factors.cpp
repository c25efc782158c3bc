#include "citescope/factors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "citescope/error.hpp"

namespace citescope {

namespace {

// Flip any column whose largest-magnitude entry (first on ties) is negative.
// `companion` columns are flipped in lockstep so loadings = input * companion
// relations stay exact.
void apply_sign_convention(Eigen::MatrixXd& columns, Eigen::MatrixXd* companion) {
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        Eigen::Index peak = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < columns.rows(); ++i) {
            const double mag = std::abs(columns(i, c));
            if (mag > best) {
                best = mag;
                peak = i;
            }
        }
        if (columns(peak, c) < 0.0) {
            columns.col(c) = -columns.col(c);
            if (companion) companion->col(c) = -companion->col(c);
        }
    }
}

}  // namespace

Eigen::MatrixXd correlation_matrix(const Environment& env) {
    const CitationMatrix& sub = env.sub_matrix;
    const std::size_t p = env.members.size();
    if (p < 2) throw Error("correlation matrix needs at least 2 variables");

    const std::size_t n = p;  // observations: the cited columns of sub_matrix
    Eigen::MatrixXd centered(p, n);
    for (std::size_t i = 0; i < p; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) mean += static_cast<double>(sub.at(i, j));
        mean /= static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j)
            centered(i, j) = static_cast<double>(sub.at(i, j)) - mean;
    }

    Eigen::VectorXd norms(p);
    for (std::size_t i = 0; i < p; ++i) {
        norms(i) = centered.row(i).norm();
        if (norms(i) == 0.0)
            throw Error("zero variance variable: \"" + env.members[i] +
                        "\" has a constant citing pattern");
    }

    Eigen::MatrixXd corr(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        corr(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double r = centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j));
            corr(i, j) = r;
            corr(j, i) = r;
        }
    }
    return corr;
}

PcaResult principal_components(const Eigen::MatrixXd& correlation,
                               std::optional<int> components) {
    const Eigen::Index p = correlation.rows();
    if (p == 0 || correlation.cols() != p)
        throw Error("principal components: correlation matrix must be square");
    const double asym = (correlation - correlation.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
        throw Error("principal components: input is not symmetric (max asymmetry " +
                    std::to_string(asym) + ")");
    if (components && (*components < 0 || *components > p))
        throw Error("principal components: component count must lie in [0, p]");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(correlation);
    if (solver.info() != Eigen::Success) {
        const double residual =
            (correlation * solver.eigenvectors() -
             solver.eigenvectors() * solver.eigenvalues().asDiagonal())
                .norm();
        throw Error("principal components: eigendecomposition did not converge (residual " +
                    std::to_string(residual) + ")");
    }

    // Eigen reports ascending order; reverse to descending.
    PcaResult result;
    result.eigenvalues = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

    Eigen::Index k;
    if (components) {
        k = *components;
    } else {
        k = 0;
        while (k < p && result.eigenvalues(k) > 1.0) ++k;
    }

    result.loadings.resize(p, k);
    for (Eigen::Index c = 0; c < k; ++c)
        result.loadings.col(c) =
            vectors.col(c) * std::sqrt(std::max(result.eigenvalues(c), 0.0));
    apply_sign_convention(result.loadings, nullptr);
    return result;
}

double varimax_criterion(const Eigen::MatrixXd& loadings) {
    const double p = static_cast<double>(loadings.rows());
    double criterion = 0.0;
    for (Eigen::Index c = 0; c < loadings.cols(); ++c) {
        const Eigen::ArrayXd sq = loadings.col(c).array().square();
        const double mean_sq = sq.mean();
        criterion += sq.square().sum() / p - mean_sq * mean_sq;
    }
    return criterion;
}

VarimaxResult varimax_rotate(const Eigen::MatrixXd& loadings, bool kaiser_normalize,
                             double tolerance, int max_iterations) {
    if (tolerance <= 0.0) throw Error("varimax: tolerance must be positive");
    if (max_iterations < 1) throw Error("varimax: max_iterations must be at least 1");
    const Eigen::Index p = loadings.rows();
    const Eigen::Index k = loadings.cols();

    VarimaxResult result;
    result.rotation = Eigen::MatrixXd::Identity(k, k);
    result.loadings = loadings;
    if (k <= 1) return result;

    Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(p);
    Eigen::MatrixXd work = loadings;
    if (kaiser_normalize) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const double communality = loadings.row(i).squaredNorm();
            if (communality == 0.0)
                throw Error("varimax: row " + std::to_string(i) +
                            " has zero communality, cannot Kaiser-normalize");
            row_scale(i) = std::sqrt(communality);
            work.row(i) /= row_scale(i);
        }
    }

    const double n = static_cast<double>(p);
    double criterion = varimax_criterion(work);
    result.criterion_history.push_back(criterion);

    result.converged = false;
    int sweeps = 0;
    while (sweeps < max_iterations) {
        ++sweeps;
        bool rotated = false;
        for (Eigen::Index a = 0; a + 1 < k; ++a) {
            for (Eigen::Index b = a + 1; b < k; ++b) {
                // Closed-form optimal planar angle for the pair (a, b).
                double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
                for (Eigen::Index i = 0; i < p; ++i) {
                    const double x = work(i, a);
                    const double y = work(i, b);
                    const double u = x * x - y * y;
                    const double v = 2.0 * x * y;
                    A += u;
                    B += v;
                    C += u * u - v * v;
                    D += 2.0 * u * v;
                }
                const double numerator = D - 2.0 * A * B / n;
                const double denominator = C - (A * A - B * B) / n;
                const double angle = 0.25 * std::atan2(numerator, denominator);
                if (std::abs(angle) < 1e-13) continue;

                const double cos_a = std::cos(angle);
                const double sin_a = std::sin(angle);
                for (Eigen::Index i = 0; i < p; ++i) {
                    const double x = work(i, a);
                    const double y = work(i, b);
                    work(i, a) = cos_a * x + sin_a * y;
                    work(i, b) = -sin_a * x + cos_a * y;
                }
                for (Eigen::Index i = 0; i < k; ++i) {
                    const double x = result.rotation(i, a);
                    const double y = result.rotation(i, b);
                    result.rotation(i, a) = cos_a * x + sin_a * y;
                    result.rotation(i, b) = -sin_a * x + cos_a * y;
                }
                rotated = true;
            }
        }

        const double updated = varimax_criterion(work);
        result.criterion_history.push_back(updated);
        const double change = updated - criterion;
        criterion = updated;
        if (!rotated ||
            change < tolerance * std::max(std::abs(updated),
                                          std::numeric_limits<double>::min())) {
            result.converged = true;
            break;
        }
    }
    result.iterations_used = sweeps;

    if (kaiser_normalize)
        work.array().colwise() *= row_scale.array();
    result.loadings = work;
    apply_sign_convention(result.loadings, &result.rotation);
    return result;
}

FactorModel fit_factor_model(const Environment& env, const FactorOptions& options) {
    FactorModel model;
    model.variables = env.members;
    model.correlation = correlation_matrix(env);

    PcaResult pca = principal_components(model.correlation, options.components);
    model.eigenvalues = pca.eigenvalues;
    model.loadings_unrotated = pca.loadings;

    const Eigen::Index k = pca.loadings.cols();
    if (options.kaiser_normalize && k >= 1) {
        for (Eigen::Index i = 0; i < pca.loadings.rows(); ++i)
            if (pca.loadings.row(i).squaredNorm() == 0.0)
                throw Error("zero communality: \"" + model.variables[i] +
                            "\" loads on none of the retained components");
    }

    VarimaxResult rotated = varimax_rotate(pca.loadings, options.kaiser_normalize,
                                           options.tolerance, options.max_iterations);
    model.loadings_rotated = rotated.loadings;
    model.rotation = rotated.rotation;
    model.iterations_used = rotated.iterations_used;
    model.rotation_converged = rotated.converged;

    model.variance_explained_total =
        k == 0 ? 0.0
               : model.eigenvalues.head(k).sum() / static_cast<double>(model.eigenvalues.size());
    return model;
}

std::string format_loadings_table(const FactorModel& model, double display_cutoff) {
    const Eigen::Index k = model.loadings_rotated.cols();
    std::size_t label_width = std::string("journal").size();
    for (const auto& v : model.variables) label_width = std::max(label_width, v.size());

    std::string out = "journal";
    out.append(label_width - 7, ' ');
    char buf[32];
    for (Eigen::Index c = 0; c < k; ++c) {
        std::snprintf(buf, sizeof buf, "  component_%lld", static_cast<long long>(c + 1));
        out += buf;
    }
    out.push_back('\n');

    for (std::size_t i = 0; i < model.variables.size(); ++i) {
        out += model.variables[i];
        out.append(label_width - model.variables[i].size(), ' ');
        for (Eigen::Index c = 0; c < k; ++c) {
            const double value = model.loadings_rotated(static_cast<Eigen::Index>(i), c);
            const std::size_t column_width = 13;  // matches "  component_N"
            if (std::abs(value) < display_cutoff) {
                out.append(column_width, ' ');
            } else {
                std::snprintf(buf, sizeof buf, "%*.3f", static_cast<int>(column_width), value);
                out += buf;
            }
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out.push_back('\n');
    }
    return out;
}

}  // namespace citescope
