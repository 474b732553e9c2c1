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

#include "cvmdi/gaussian.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <ostream>
#include <set>

#include "cvmdi/error.h"

namespace cvmdi {

namespace {

std::size_t checked_modes(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
        fail(ErrorKind::InvalidArgument, fmt::format("expected a non-empty 2N x 2N matrix, got {}x{}", m.rows(), m.cols()));
    }
    return static_cast<std::size_t>(m.rows() / 2);
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd &m) {
    Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    return s;
}

// Selects rows/cols of `m` by index.
Eigen::MatrixXd take(const Eigen::MatrixXd &m, const std::vector<Eigen::Index> &rows, const std::vector<Eigen::Index> &cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); r++) {
        for (std::size_t c = 0; c < cols.size(); c++) {
            out(r, c) = m(rows[r], cols[c]);
        }
    }
    return out;
}

}  // namespace

std::string to_string(const MeasurementSpec &m) {
    return (m.quadrature == Quadrature::X ? "X_" : "P_") + m.mode;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries, std::vector<std::string> labels)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
    std::size_t n = checked_modes(entries_);
    if (labels_.size() != n) {
        fail(ErrorKind::InvalidArgument, fmt::format("{} labels for {} modes", labels_.size(), n));
    }
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) {
        fail(ErrorKind::InvalidArgument, "duplicate mode labels");
    }
    if (!entries_.allFinite()) {
        fail(ErrorKind::InvalidArgument, "covariance matrix has non-finite entries");
    }
    entries_ = symmetrized(entries_);
}

CovarianceMatrix CovarianceMatrix::vacuum(std::vector<std::string> labels) {
    auto n = static_cast<Eigen::Index>(2 * labels.size());
    return CovarianceMatrix(Eigen::MatrixXd::Identity(n, n), std::move(labels));
}

std::optional<std::size_t> CovarianceMatrix::find_mode(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t CovarianceMatrix::mode_index(const std::string &label) const {
    auto k = find_mode(label);
    if (!k) {
        fail(ErrorKind::InvalidArgument, "no mode labelled '" + label + "'");
    }
    return *k;
}

std::size_t CovarianceMatrix::quadrature_index(const MeasurementSpec &m) const {
    return 2 * mode_index(m.mode) + (m.quadrature == Quadrature::X ? 0 : 1);
}

double CovarianceMatrix::variance(const MeasurementSpec &m) const {
    auto k = static_cast<Eigen::Index>(quadrature_index(m));
    return entries_(k, k);
}

double CovarianceMatrix::covariance(const MeasurementSpec &a, const MeasurementSpec &b) const {
    return entries_(static_cast<Eigen::Index>(quadrature_index(a)), static_cast<Eigen::Index>(quadrature_index(b)));
}

CovarianceMatrix CovarianceMatrix::reduced(std::span<const std::string> modes) const {
    std::vector<Eigen::Index> idx;
    std::vector<std::string> labels;
    for (const auto &m : modes) {
        auto k = static_cast<Eigen::Index>(mode_index(m));
        idx.push_back(2 * k);
        idx.push_back(2 * k + 1);
        labels.push_back(m);
    }
    return CovarianceMatrix(take(entries_, idx, idx), std::move(labels));
}

CovarianceMatrix CovarianceMatrix::with_labels(std::vector<std::string> labels) const {
    return CovarianceMatrix(entries_, std::move(labels));
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    checked_modes(entries_);
    double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if (symplectic_defect() > kBonaFideTolerance * scale * scale) {
        fail(ErrorKind::InvalidArgument,
             fmt::format("matrix is not symplectic (defect {:.3g})", symplectic_defect()));
    }
}

SymplecticTransform SymplecticTransform::identity(std::size_t n_modes) {
    auto n = static_cast<Eigen::Index>(2 * n_modes);
    return SymplecticTransform(Eigen::MatrixXd::Identity(n, n));
}

double SymplecticTransform::symplectic_defect() const {
    Eigen::MatrixXd omega = symplectic_form(num_modes());
    return (entries_ * omega * entries_.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticTransform operator*(const SymplecticTransform &a, const SymplecticTransform &b) {
    if (a.num_modes() != b.num_modes()) {
        fail(ErrorKind::InvalidArgument, "composing transforms of different sizes");
    }
    return SymplecticTransform(a.entries_ * b.entries_);
}

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    auto n = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
        omega(k, k + 1) = 1;
        omega(k + 1, k) = -1;
    }
    return omega;
}

CovarianceMatrix tmss_cov(double variance, std::string first, std::string second) {
    if (!(variance >= 1)) {
        fail(ErrorKind::InvalidParameter, fmt::format("TMSS variance must be >= 1, got {}", variance));
    }
    double c = std::sqrt(variance * variance - 1);
    Eigen::MatrixXd m = variance * Eigen::MatrixXd::Identity(4, 4);
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    return CovarianceMatrix(std::move(m), {std::move(first), std::move(second)});
}

CovarianceMatrix thermal_cov(double variance, std::string label) {
    if (!(variance >= 1)) {
        fail(ErrorKind::InvalidParameter, fmt::format("thermal variance must be >= 1, got {}", variance));
    }
    return CovarianceMatrix(variance * Eigen::MatrixXd::Identity(2, 2), {std::move(label)});
}

CovarianceMatrix tensor(const CovarianceMatrix &a, const CovarianceMatrix &b) {
    std::vector<std::string> labels = a.labels();
    for (const auto &l : b.labels()) {
        if (a.find_mode(l)) {
            fail(ErrorKind::InvalidArgument, "tensor product of states sharing mode '" + l + "'");
        }
        labels.push_back(l);
    }
    auto na = a.matrix().rows();
    auto nb = b.matrix().rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(na + nb, na + nb);
    m.topLeftCorner(na, na) = a.matrix();
    m.bottomRightCorner(nb, nb) = b.matrix();
    return CovarianceMatrix(std::move(m), std::move(labels));
}

SymplecticTransform beamsplitter(std::size_t n_modes, std::size_t i, std::size_t j, double transmittance) {
    if (i == j || i >= n_modes || j >= n_modes) {
        fail(ErrorKind::InvalidArgument, fmt::format("beam splitter modes ({}, {}) invalid for {} modes", i, j, n_modes));
    }
    if (!(transmittance >= 0 && transmittance <= 1)) {
        fail(ErrorKind::InvalidParameter, fmt::format("transmittance must lie in [0, 1], got {}", transmittance));
    }
    double s = std::sqrt(transmittance);
    double r = std::sqrt(1 - transmittance);
    auto n = static_cast<Eigen::Index>(2 * n_modes);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    auto a = static_cast<Eigen::Index>(2 * i);
    auto b = static_cast<Eigen::Index>(2 * j);
    for (Eigen::Index q = 0; q < 2; q++) {
        m(a + q, a + q) = s;
        m(a + q, b + q) = r;
        m(b + q, a + q) = -r;
        m(b + q, b + q) = s;
    }
    return SymplecticTransform(std::move(m));
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix &cov, const SymplecticTransform &s) {
    if (cov.num_modes() != s.num_modes()) {
        fail(ErrorKind::InvalidArgument,
             fmt::format("transform on {} modes applied to {}-mode state", s.num_modes(), cov.num_modes()));
    }
    return CovarianceMatrix(s.matrix() * cov.matrix() * s.matrix().transpose(), cov.labels());
}

CovarianceMatrix permute_modes(const CovarianceMatrix &cov, std::span<const std::string> order) {
    if (order.size() != cov.num_modes()) {
        fail(ErrorKind::InvalidArgument, "permutation must list every mode exactly once");
    }
    std::set<std::string> seen(order.begin(), order.end());
    if (seen.size() != order.size()) {
        fail(ErrorKind::InvalidArgument, "permutation repeats a mode");
    }
    return cov.reduced(order);
}

CovarianceMatrix condition_on_homodyne(const CovarianceMatrix &cov, std::span<const MeasurementSpec> measured) {
    if (measured.empty()) {
        return cov;
    }
    std::vector<bool> is_measured(cov.num_modes(), false);
    std::vector<Eigen::Index> meas_idx;
    for (const auto &m : measured) {
        auto k = cov.mode_index(m.mode);
        if (is_measured[k]) {
            fail(ErrorKind::InvalidArgument, "mode '" + m.mode + "' measured twice");
        }
        is_measured[k] = true;
        meas_idx.push_back(static_cast<Eigen::Index>(cov.quadrature_index(m)));
    }
    if (meas_idx.size() == cov.num_modes()) {
        fail(ErrorKind::InvalidArgument, "homodyne conditioning would leave no modes");
    }
    std::vector<Eigen::Index> keep_idx;
    std::vector<std::string> keep_labels;
    for (std::size_t k = 0; k < cov.num_modes(); k++) {
        if (!is_measured[k]) {
            keep_idx.push_back(static_cast<Eigen::Index>(2 * k));
            keep_idx.push_back(static_cast<Eigen::Index>(2 * k + 1));
            keep_labels.push_back(cov.labels()[k]);
        }
    }
    const auto &v = cov.matrix();
    Eigen::MatrixXd vmm = take(v, meas_idx, meas_idx);
    for (Eigen::Index k = 0; k < vmm.rows(); k++) {
        if (!(vmm(k, k) >= kDegenerateVariance)) {
            fail(ErrorKind::DegenerateMeasurement, fmt::format("measured variance {} too small", vmm(k, k)));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(vmm);
    if (llt.info() != Eigen::Success) {
        fail(ErrorKind::DegenerateMeasurement, "measured quadratures have a singular joint covariance");
    }
    Eigen::MatrixXd c = take(v, keep_idx, meas_idx);
    Eigen::MatrixXd out = take(v, keep_idx, keep_idx) - c * llt.solve(c.transpose());
    return CovarianceMatrix(std::move(out), std::move(keep_labels));
}

CovarianceMatrix condition_on_homodyne(const CovarianceMatrix &cov, const MeasurementSpec &measured) {
    return condition_on_homodyne(cov, std::span<const MeasurementSpec>(&measured, 1));
}

SymplecticSpectrum symplectic_eigenvalues(const Eigen::MatrixXd &cov) {
    auto n = checked_modes(cov);
    Eigen::MatrixXd v = symmetrized(cov);
    Eigen::MatrixXd omega = symplectic_form(n);
    std::vector<double> moduli;
    bool exact_pairs = false;

    // For positive definite V = L L^T, Omega V is similar to the antisymmetric
    // matrix L^T Omega L whose singular values are the symplectic eigenvalues,
    // each appearing twice.
    Eigen::LLT<Eigen::MatrixXd> llt(v);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd l = llt.matrixL();
        Eigen::MatrixXd a = l.transpose() * omega * l;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
        const auto &s = svd.singularValues();
        moduli.assign(s.data(), s.data() + s.size());
        exact_pairs = true;
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(omega * v, false);
        if (es.info() != Eigen::Success) {
            fail(ErrorKind::Numerical, "eigen-solver failed on Omega V");
        }
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); k++) {
            moduli.push_back(std::abs(es.eigenvalues()[k]));
        }
    }
    std::sort(moduli.begin(), moduli.end());
    SymplecticSpectrum out;
    for (std::size_t k = 0; k < n; k++) {
        double a = moduli[2 * k];
        double b = moduli[2 * k + 1];
        if (exact_pairs && std::abs(a - b) > 1e-8 * std::max(1.0, b)) {
            fail(ErrorKind::Numerical, fmt::format("unpaired symplectic eigenvalues {} and {}", a, b));
        }
        out.values.push_back(0.5 * (a + b));
    }
    return out;
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix &cov) {
    return symplectic_eigenvalues(cov.matrix());
}

double entropy_function(double nu) {
    // With y = (nu - 1) / 2:  h = (1 + y) log2(1 + y) - y log2(y)
    //                            = log2(1 + y) + y log2(1 + 1/y).
    double y = 0.5 * (nu - 1);
    if (y <= 0) {
        return 0;
    }
    return (std::log1p(y) + y * std::log1p(1 / y)) / std::numbers::ln2;
}

EntropyResult entropy_detail(const CovarianceMatrix &cov) {
    EntropyResult out;
    for (double nu : symplectic_eigenvalues(cov).values) {
        if (nu < 1 - kUnphysicalTolerance) {
            fail(ErrorKind::UnphysicalState, fmt::format("symplectic eigenvalue {} < 1", nu));
        }
        if (nu < 1 - kBonaFideTolerance) {
            out.clamped = true;
        }
        out.bits += entropy_function(std::max(nu, 1.0));
    }
    return out;
}

double von_neumann_entropy(const CovarianceMatrix &cov) {
    return entropy_detail(cov).bits;
}

double mutual_info_homodyne(
    const CovarianceMatrix &cov, const MeasurementSpec &target, std::span<const MeasurementSpec> conditioners) {
    for (const auto &c : conditioners) {
        if (c.mode == target.mode) {
            fail(ErrorKind::InvalidArgument, "target mode '" + target.mode + "' also appears as a conditioner");
        }
    }
    double v = cov.variance(target);
    if (!(v >= kDegenerateVariance)) {
        fail(ErrorKind::DegenerateMeasurement, fmt::format("target variance {} too small", v));
    }
    auto conditioned = condition_on_homodyne(cov, conditioners);
    double v_cond = conditioned.variance(target);
    if (!(v_cond >= kDegenerateVariance)) {
        fail(ErrorKind::DegenerateMeasurement, fmt::format("conditional variance {} too small", v_cond));
    }
    return 0.5 * std::log2(v / v_cond);
}

double bona_fide_margin(const Eigen::MatrixXd &cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(cov));
    if (llt.info() != Eigen::Success) {
        return -1;
    }
    return symplectic_eigenvalues(cov).min() - 1;
}

bool is_bona_fide(const CovarianceMatrix &cov) {
    return bona_fide_margin(cov.matrix()) >= -kBonaFideTolerance;
}

CovarianceMatrix partial_transpose(const CovarianceMatrix &cov, std::span<const std::string> side) {
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(cov.matrix().rows());
    for (const auto &m : side) {
        signs(static_cast<Eigen::Index>(2 * cov.mode_index(m) + 1)) = -1;
    }
    return CovarianceMatrix(signs.asDiagonal() * cov.matrix() * signs.asDiagonal(), cov.labels());
}

bool ppt_entangled(const CovarianceMatrix &cov, std::span<const std::string> side) {
    std::set<std::string> unique(side.begin(), side.end());
    if (unique.empty() || unique.size() >= cov.num_modes() || unique.size() != side.size()) {
        fail(ErrorKind::InvalidArgument, "bipartition must split the modes into two non-empty sides");
    }
    auto pt = partial_transpose(cov, side);
    return symplectic_eigenvalues(pt).min() < 1 - kBonaFideTolerance;
}

void write_csv(std::ostream &out, const Eigen::MatrixXd &m) {
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            if (c > 0) {
                out << ',';
            }
            out << fmt::format("{}", m(r, c));
        }
        out << '\n';
    }
}

}  // namespace cvmdi
