// Copyright 2026 The cvmdi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVMDI_GAUSSIAN_H
#define CVMDI_GAUSSIAN_H

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvmdi {

/// Tolerance on the smallest symplectic eigenvalue for a state to count as physical.
inline constexpr double kBonaFideTolerance = 1e-9;
/// Below 1 - kUnphysicalTolerance an entropy evaluation refuses the state.
inline constexpr double kUnphysicalTolerance = 1e-6;
/// Smallest measured-quadrature variance accepted by homodyne conditioning.
inline constexpr double kDegenerateVariance = 1e-12;

enum class Quadrature { X, P };

struct MeasurementSpec {
    std::string mode;
    Quadrature quadrature;

    bool operator==(const MeasurementSpec &) const = default;
};

inline MeasurementSpec X(std::string mode) {
    return {std::move(mode), Quadrature::X};
}
inline MeasurementSpec P(std::string mode) {
    return {std::move(mode), Quadrature::P};
}

std::string to_string(const MeasurementSpec &m);

/// Covariance matrix of an N-mode Gaussian state in shot-noise units
/// (vacuum = identity), quadratures ordered (x1, p1, x2, p2, ...).
///
/// The stored matrix is always exactly symmetric. Physicality is not enforced
/// here; use is_bona_fide() for that.
class CovarianceMatrix {
   public:
    CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels);

    static CovarianceMatrix vacuum(std::vector<std::string> labels);

    std::size_t num_modes() const {
        return labels_.size();
    }
    const Eigen::MatrixXd &matrix() const {
        return entries_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }

    std::optional<std::size_t> find_mode(const std::string &label) const;
    /// Index of the mode; throws invalid-argument if absent.
    std::size_t mode_index(const std::string &label) const;
    /// Row/column of a single quadrature.
    std::size_t quadrature_index(const MeasurementSpec &m) const;

    double variance(const MeasurementSpec &m) const;
    double covariance(const MeasurementSpec &a, const MeasurementSpec &b) const;

    /// Reduced state on the given modes, in the given order.
    CovarianceMatrix reduced(std::span<const std::string> modes) const;
    CovarianceMatrix with_labels(std::vector<std::string> labels) const;

   private:
    Eigen::MatrixXd entries_;
    std::vector<std::string> labels_;
};

/// Linear map on quadrature vectors satisfying S Omega S^T = Omega.
class SymplecticTransform {
   public:
    explicit SymplecticTransform(Eigen::MatrixXd entries);
    static SymplecticTransform identity(std::size_t n_modes);

    std::size_t num_modes() const {
        return static_cast<std::size_t>(entries_.rows() / 2);
    }
    const Eigen::MatrixXd &matrix() const {
        return entries_;
    }
    /// Max-norm deviation of S Omega S^T from Omega.
    double symplectic_defect() const;

    /// Composition: (a * b) applies b first, then a.
    friend SymplecticTransform operator*(const SymplecticTransform &a, const SymplecticTransform &b);

   private:
    Eigen::MatrixXd entries_;
};

struct SymplecticSpectrum {
    std::vector<double> values;  // ascending

    double min() const {
        return values.front();
    }
};

struct EntropyResult {
    double bits = 0;
    /// Set when some eigenvalue sat in [1 - 1e-6, 1 - 1e-9) and was clamped to 1.
    bool clamped = false;
};

/// Omega = direct sum of [[0, 1], [-1, 0]] over n modes.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

CovarianceMatrix tmss_cov(double variance, std::string first = "1", std::string second = "2");
CovarianceMatrix thermal_cov(double variance, std::string label);
CovarianceMatrix tensor(const CovarianceMatrix &a, const CovarianceMatrix &b);

/// Beam splitter with power transmittance t between modes i and j:
///   out_i =  sqrt(t) in_i + sqrt(1-t) in_j
///   out_j = -sqrt(1-t) in_i + sqrt(t) in_j
SymplecticTransform beamsplitter(std::size_t n_modes, std::size_t i, std::size_t j, double transmittance);

CovarianceMatrix apply_symplectic(const CovarianceMatrix &cov, const SymplecticTransform &s);
CovarianceMatrix permute_modes(const CovarianceMatrix &cov, std::span<const std::string> order);

/// Covariance of the unmeasured modes after homodyning the given quadratures.
/// The result does not depend on the measurement outcomes. All measured
/// quadratures are conditioned on jointly (one Schur complement).
CovarianceMatrix condition_on_homodyne(const CovarianceMatrix &cov, std::span<const MeasurementSpec> measured);
CovarianceMatrix condition_on_homodyne(const CovarianceMatrix &cov, const MeasurementSpec &measured);

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix &cov);
SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd &cov);

/// Binary entropy function of a symplectic eigenvalue, in bits.
double entropy_function(double nu);
EntropyResult entropy_detail(const CovarianceMatrix &cov);
double von_neumann_entropy(const CovarianceMatrix &cov);

/// 1/2 log2 [ V(target) / V(target | conditioners) ].
double mutual_info_homodyne(
    const CovarianceMatrix &cov, const MeasurementSpec &target, std::span<const MeasurementSpec> conditioners);

/// nu_min - 1 when the matrix is positive definite, otherwise -1.
double bona_fide_margin(const Eigen::MatrixXd &cov);
bool is_bona_fide(const CovarianceMatrix &cov);

/// Flips the sign of every p quadrature of the given modes.
CovarianceMatrix partial_transpose(const CovarianceMatrix &cov, std::span<const std::string> side);
/// True when the partial transpose across (side | rest) is not a physical
/// covariance matrix, i.e. the state is NPT and hence entangled.
bool ppt_entangled(const CovarianceMatrix &cov, std::span<const std::string> side);

/// Row-major CSV dump with 17 significant digits.
void write_csv(std::ostream &out, const Eigen::MatrixXd &m);

}  // namespace cvmdi

#endif
