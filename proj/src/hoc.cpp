// Copyright 2026 The qlocal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlocal/hoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qlocal/error.hpp"

namespace qlocal {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 spin_rotation(const BlochVector &unit_axis, double angle) {
    // exp(-i angle/2 u.sigma)
    return std::cos(0.5 * angle) * pauli_i() - kI * std::sin(0.5 * angle) * pauli_axis_op(unit_axis);
}

/// U^dagger M U for U = prod_j U_j.
CMatrix rotate_into_frames(const CMatrix &m, const std::vector<Mat2> &frames) {
    const int n = static_cast<int>(frames.size());
    CMatrix w = m;
    for (int j = 1; j <= n; ++j) {
        w = conjugate_local(w, j, n, frames[static_cast<size_t>(j - 1)]);
    }
    return w;
}

std::vector<Mat2> frames_for(const AxisAssignment &axes) {
    std::vector<Mat2> frames;
    frames.reserve(axes.axes().size());
    for (const auto &a : axes.axes()) {
        frames.push_back(axis_basis(a));
    }
    return frames;
}

std::vector<Complex> walsh_of_diagonal(const CMatrix &w) {
    std::vector<Complex> d(static_cast<size_t>(w.rows()));
    for (Eigen::Index x = 0; x < w.rows(); ++x) {
        d[static_cast<size_t>(x)] = w(x, x);
    }
    walsh_hadamard_inplace(d);
    return d;
}

double max_nonempty(const std::vector<Complex> &traces) {
    double worst = 0.0;
    for (size_t a = 1; a < traces.size(); ++a) {
        worst = std::max(worst, std::abs(traces[a]));
    }
    return worst;
}

double m_scale(const MMatrix &m) { return std::max(1.0, m.matrix().norm()); }

}  // namespace

AxisAssignment::AxisAssignment(std::vector<BlochVector> axes) : axes_(std::move(axes)) {
    require(!axes_.empty() && axes_.size() <= static_cast<size_t>(kMaxQubits), "axis count out of range");
    for (const auto &a : axes_) {
        if (!a.allFinite() || std::abs(a.norm() - 1.0) > tol::kIdentity) {
            fail(ErrorKind::Contract, "measurement axes must be unit vectors");
        }
    }
}

AxisAssignment AxisAssignment::uniform(int nqubits, const BlochVector &axis) {
    require(nqubits >= 1, "need at least one qubit");
    return AxisAssignment(std::vector<BlochVector>(static_cast<size_t>(nqubits), axis));
}

std::vector<Complex> hoc_traces(const MMatrix &m, const AxisAssignment &axes) {
    require(axes.nqubits() == m.nqubits(), "axis count does not match M");
    return walsh_of_diagonal(rotate_into_frames(m.matrix(), frames_for(axes)));
}

double hoc_residual(const MMatrix &m, const AxisAssignment &axes) { return max_nonempty(hoc_traces(m, axes)); }

std::vector<BlochVector> single_qubit_plane_vectors(const MMatrix &m) {
    std::vector<BlochVector> out;
    for (int j = 1; j <= m.nqubits(); ++j) {
        out.push_back(bloch_vector(partial_trace_to_qubit(m.matrix(), j), BlochKind::AntiHermitian));
    }
    return out;
}

PlanarFrame PlanarFrame::perpendicular_to(const BlochVector &normal) {
    BlochVector c = normal.normalized();
    if (BlochVector::UnitZ().cross(c).norm() < 1e-12) {
        return {BlochVector::UnitX(), BlochVector::UnitY()};
    }
    BlochVector e1 = BlochVector::UnitZ().cross(c).normalized();
    BlochVector e2 = c.cross(e1);
    return {e1, e2};
}

PairCoupling pair_coupling(const Model &model, double lambda, int j, int k) {
    return pair_coupling(model, lambda, j, k, {BlochVector::UnitX(), BlochVector::UnitY()});
}

PairCoupling pair_coupling(const Model &model, double lambda, int j, int k, const PlanarFrame &frame) {
    const HamiltonianEncoding *enc = model.hamiltonian();
    require(enc != nullptr, "pair coupling needs a hamiltonian encoding");
    const int n = model.nqubits();
    require(j >= 1 && j <= n && k >= 1 && k <= n && j != k, "pair coupling needs two distinct qubits");

    StateJet jet = state_jet(model, lambda);
    MMatrix m = m_matrix(jet);
    if (!m.is_trivial()) {
        auto mv = single_qubit_plane_vectors(m);
        BlochVector normal = frame.e1.cross(frame.e2);
        for (int q : {j, k}) {
            const BlochVector &v = mv[static_cast<size_t>(q - 1)];
            if (v.norm() <= tol::kStructural * m_scale(m) || v.cross(normal).norm() > 1e-8 * v.norm()) {
                fail(ErrorKind::Contract, "pair coupling needs m-vectors normal to the planar frame (qubit " +
                                              std::to_string(q) + ")");
            }
        }
    }

    const CMatrix &h_raw = enc->hamiltonian;
    const CVector &probe = model.probe().amplitudes();
    const double mean = probe.dot(h_raw * probe).real();
    const CVector &psi = jet.state.amplitudes();
    const CVector h_psi = h_raw * psi - mean * psi;

    const Mat2 p[2] = {pauli_axis_op(frame.e1), pauli_axis_op(frame.e2)};
    PairCoupling out{j, k, Eigen::Matrix2d::Zero()};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            CVector v = psi;
            apply_local_inplace(v, j, n, p[a]);
            apply_local_inplace(v, k, n, p[b]);
            // 1/2 <{h, A}> = Re <h psi|A psi>
            out.t(a, b) = h_psi.dot(v).real();
        }
    }
    return out;
}

const char *to_string(HocStatus status) {
    switch (status) {
        case HocStatus::Feasible: return "feasible";
        case HocStatus::Inconclusive: return "inconclusive";
        case HocStatus::NumericallyInfeasible: return "numerically-infeasible";
        case HocStatus::CertifiedInfeasible: return "certified-infeasible";
    }
    return "unknown";
}

namespace {

/// Parametrization of one qubit's measurement frame U_j (U_j Z U_j^dagger = n.sigma).
struct QubitSearchSpace {
    bool planar = false;
    BlochVector rotation_axis;  // planar: e1 x e2
    Mat2 base;                  // planar: frame of e1

    int parameter_count() const { return planar ? 1 : 2; }

    Mat2 frame(const double *p) const {
        if (planar) {
            return spin_rotation(rotation_axis, p[0]) * base;
        }
        // Rz(phi) Ry(theta): axis (sin t cos f, sin t sin f, cos t).
        return spin_rotation(BlochVector::UnitZ(), p[1]) * spin_rotation(BlochVector::UnitY(), p[0]);
    }

    /// U_j^dagger dU_j/dp for each parameter.
    void generators(const double *p, Mat2 *out) const {
        Mat2 u = frame(p);
        if (planar) {
            out[0] = u.adjoint() * (-0.5 * kI * pauli_axis_op(rotation_axis)) * u;
            return;
        }
        out[0] = -0.5 * kI * pauli_y();
        out[1] = u.adjoint() * (-0.5 * kI * pauli_z()) * u;
    }
};

class HocSearch {
   public:
    HocSearch(const MMatrix &m, std::vector<QubitSearchSpace> spaces) : m_(m), spaces_(std::move(spaces)) {
        for (const auto &s : spaces_) {
            offsets_.push_back(param_count_);
            param_count_ += s.parameter_count();
        }
    }

    int parameter_count() const { return param_count_; }

    std::vector<Mat2> frames(const Eigen::VectorXd &p) const {
        std::vector<Mat2> f;
        for (size_t j = 0; j < spaces_.size(); ++j) {
            f.push_back(spaces_[j].frame(p.data() + offsets_[j]));
        }
        return f;
    }

    AxisAssignment axes(const Eigen::VectorXd &p) const {
        std::vector<BlochVector> a;
        for (const Mat2 &u : frames(p)) {
            a.push_back(bloch_vector(u * pauli_z() * u.adjoint(), BlochKind::Hermitian).normalized());
        }
        return AxisAssignment(std::move(a));
    }

    /// Residuals r_x = Im (U^dagger M U)_xx and, optionally, their Jacobian.
    Eigen::VectorXd residuals(const Eigen::VectorXd &p, Eigen::MatrixXd *jacobian) const {
        const int n = m_.nqubits();
        const CMatrix w = rotate_into_frames(m_.matrix(), frames(p));
        const Eigen::Index dim = w.rows();
        Eigen::VectorXd r(dim);
        for (Eigen::Index x = 0; x < dim; ++x) {
            r[x] = w(x, x).imag();
        }
        if (jacobian == nullptr) {
            return r;
        }
        jacobian->resize(dim, param_count_);
        Mat2 gens[2];
        for (size_t j = 0; j < spaces_.size(); ++j) {
            const auto &space = spaces_[j];
            space.generators(p.data() + offsets_[j], gens);
            const Eigen::Index bit = Eigen::Index{1} << (n - 1 - static_cast<int>(j));
            for (int q = 0; q < space.parameter_count(); ++q) {
                const Mat2 &k = gens[q];
                // d(W)_xx = (W K - K W)_xx for anti-hermitian K acting on qubit j.
                for (Eigen::Index x = 0; x < dim; ++x) {
                    const int b = (x & bit) ? 1 : 0;
                    const Eigen::Index x0 = x & ~bit;
                    const Eigen::Index x1 = x | bit;
                    Complex wk = w(x, x0) * k(0, b) + w(x, x1) * k(1, b);
                    Complex kw = k(b, 0) * w(x0, x) + k(b, 1) * w(x1, x);
                    (*jacobian)(x, offsets_[j] + q) = (wk - kw).imag();
                }
            }
        }
        return r;
    }

   private:
    const MMatrix &m_;
    std::vector<QubitSearchSpace> spaces_;
    std::vector<int> offsets_;
    int param_count_ = 0;
};

/// Levenberg-Marquardt refinement from one starting point.
Eigen::VectorXd refine(const HocSearch &search, Eigen::VectorXd p, int max_iter, double target) {
    Eigen::MatrixXd jac;
    Eigen::VectorXd r = search.residuals(p, &jac);
    double cost = r.squaredNorm();
    double mu = 1e-3;
    for (int it = 0; it < max_iter && cost > target; ++it) {
        Eigen::MatrixXd a = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 12 && !improved; ++tries) {
            Eigen::MatrixXd damped = a;
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                damped(i, i) += mu * std::max(a(i, i), 1e-12);
            }
            Eigen::VectorXd step = damped.ldlt().solve(-g);
            if (!step.allFinite()) {
                mu *= 10.0;
                continue;
            }
            Eigen::VectorXd trial = p + step;
            Eigen::VectorXd r_trial = search.residuals(trial, nullptr);
            double c_trial = r_trial.squaredNorm();
            if (c_trial < cost) {
                const bool stalled = cost - c_trial <= 1e-15 * cost && step.norm() < 1e-14;
                p = trial;
                cost = c_trial;
                r = search.residuals(p, &jac);
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                if (stalled) {
                    return p;
                }
            } else {
                mu *= 4.0;
            }
        }
        if (!improved) {
            break;
        }
    }
    return p;
}

}  // namespace

HocReport hoc_solve_numeric(const MMatrix &m, const HocOptions &options) {
    require(options.restarts >= 1, "need at least one restart");
    require(options.max_iter >= 1, "need at least one iteration");
    const int n = m.nqubits();
    HocReport report;
    report.method = "numeric-multistart";
    if (m.is_trivial()) {
        report.axes = AxisAssignment::computational(n);
        report.residual = hoc_residual(m, *report.axes);
        report.status = HocStatus::Feasible;
        report.method = "trivial";
        return report;
    }

    const double scale = m_scale(m);
    std::vector<QubitSearchSpace> spaces;
    for (const BlochVector &v : single_qubit_plane_vectors(m)) {
        QubitSearchSpace s;
        if (v.norm() > 1e-8 * scale) {
            PlanarFrame frame = PlanarFrame::perpendicular_to(v);
            s.planar = true;
            s.rotation_axis = frame.e1.cross(frame.e2);
            s.base = axis_basis(frame.e1);
        }
        spaces.push_back(s);
    }
    HocSearch search(m, spaces);

    // Parseval: sum_alpha |Tr M A_alpha|^2 = 2^N sum_x r_x^2, so this target
    // sits well below the squared feasibility threshold.
    const double dim = static_cast<double>(Eigen::Index{1} << n);
    const double target = std::pow(options.feasibility_threshold * 1e-3, 2) / dim;

    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < options.restarts; ++restart) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(restart)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> cosine(-1.0, 1.0);
        Eigen::VectorXd p(search.parameter_count());
        Eigen::Index at = 0;
        for (const auto &s : spaces) {
            if (s.planar) {
                p[at++] = angle(rng);
            } else {
                p[at++] = std::acos(cosine(rng));
                p[at++] = angle(rng);
            }
        }
        p = refine(search, std::move(p), options.max_iter, target);
        AxisAssignment axes = search.axes(p);
        double residual = hoc_residual(m, axes);
        report.restarts_used = restart + 1;
        if (residual < best) {
            best = residual;
            report.axes = std::move(axes);
            report.residual = residual;
        }
        if (best < options.feasibility_threshold) {
            break;
        }
    }
    if (best < options.feasibility_threshold) {
        report.status = HocStatus::Feasible;
    } else if (best > options.infeasibility_threshold) {
        report.status = HocStatus::NumericallyInfeasible;
    } else {
        report.status = HocStatus::Inconclusive;
    }
    return report;
}

namespace {

/// (cos a, sin a) representative of a real 2-vector, or nullopt for ~0.
std::optional<double> angle_of(const Eigen::Vector2d &v) {
    if (v.norm() < tol::kStructural) {
        return std::nullopt;
    }
    return std::atan2(v[1], v[0]);
}

Eigen::Matrix2d i_pauli_y() {
    Eigen::Matrix2d m;
    m << 0, 1, -1, 0;
    return m;
}

/// Y A Y for real A (Y the Pauli matrix); the result is real.
Eigen::Matrix2d conjugate_by_y(const Eigen::Matrix2d &a) {
    Eigen::Matrix2d out;
    out << a(1, 1), -a(1, 0), -a(0, 1), a(0, 0);
    return out;
}

/// Unit vector v with v^T T v = 0 for symmetric T with det T <= 0, picking the
/// root s = cot(a) = (-T_xy + sqrt(T_xy^2 - T_xx T_yy)) / T_xx. T_xx = 0
/// reduces to the linear equation 2 T_xy s + T_yy = 0.
Eigen::Vector2d isotropic_direction(const Eigen::Matrix2d &t) {
    const double txx = t(0, 0);
    const double tyy = t(1, 1);
    const double txy = 0.5 * (t(0, 1) + t(1, 0));
    const double disc = std::sqrt(std::max(0.0, txy * txy - txx * tyy));
    if (txx == 0.0) {
        if (txy == 0.0) {
            return {0.0, 1.0};  // alpha = pi/2
        }
        return Eigen::Vector2d(-tyy / (2.0 * txy), 1.0).normalized();
    }
    // (cot a, 1) ~ (-T_xy + disc, T_xx) ~ (T_yy, -T_xy - disc); take the better
    // conditioned of the two.
    Eigen::Vector2d first(-txy + disc, txx);
    Eigen::Vector2d second(tyy, -txy - disc);
    if (first[1] < 0) {
        first = -first;
    }
    if (second[1] < 0) {
        second = -second;
    }
    return (first.norm() >= second.norm() ? first : second).normalized();
}

}  // namespace

HocReport solve_planar_three_qubit(const Model &model, double lambda, const HocOptions &fallback) {
    const int n = model.nqubits();
    StateJet jet = state_jet(model, lambda);
    MMatrix m = m_matrix(jet);

    auto defer = [&](const std::string &why) {
        HocReport r = hoc_solve_numeric(m, fallback);
        r.method = "numeric-multistart (planar pipeline skipped: " + why + ")";
        return r;
    };

    if (m.is_trivial()) {
        HocReport r;
        r.axes = AxisAssignment::computational(n);
        r.residual = hoc_residual(m, *r.axes);
        r.status = HocStatus::Feasible;
        r.method = "trivial";
        return r;
    }
    if (n != 3) {
        return defer("not a three-qubit model");
    }
    if (model.hamiltonian() == nullptr) {
        return defer("not a hamiltonian encoding");
    }

    const double scale = m_scale(m);
    auto mv = single_qubit_plane_vectors(m);
    for (const auto &v : mv) {
        if (v.norm() <= 1e-8 * scale) {
            return defer("an m-vector vanishes");
        }
    }
    const BlochVector common = mv[0].normalized();
    for (const auto &v : mv) {
        if (v.normalized().cross(common).norm() > 1e-8) {
            return defer("m-vectors are not parallel");
        }
    }
    const PlanarFrame frame = PlanarFrame::perpendicular_to(common);

    // Third-order terms must vanish for every planar choice.
    const Mat2 p[2] = {pauli_axis_op(frame.e1), pauli_axis_op(frame.e2)};
    for (int a = 0; a < 8; ++a) {
        std::vector<QubitFactor> f{{1, p[(a >> 2) & 1]}, {2, p[(a >> 1) & 1]}, {3, p[a & 1]}};
        Complex tr = (m.matrix() * embed_operators(f, 3)).trace();
        if (std::abs(tr) > tol::kStructural * scale) {
            return defer("third-order planar terms do not vanish");
        }
    }

    const Eigen::Matrix2d t12 = pair_coupling(model, lambda, 1, 2, frame).t;
    const Eigen::Matrix2d t13 = pair_coupling(model, lambda, 1, 3, frame).t;
    const Eigen::Matrix2d t32 = pair_coupling(model, lambda, 3, 2, frame).t;
    const Eigen::Matrix2d t21 = t12.transpose();
    const Eigen::Matrix2d chain = t21 * conjugate_by_y(t13) * t32;

    const Eigen::Vector2d a2 = isotropic_direction(chain);
    const Eigen::Vector2d v1 = t12 * a2;
    const Eigen::Vector2d v3 = t32 * a2;
    Eigen::Vector2d a1;
    Eigen::Vector2d a3;
    std::string branch = "chain";
    if (v1.norm() < tol::kStructural && v3.norm() < tol::kStructural) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(0.5 * (t13 + t13.transpose()));
        a1 = eig.eigenvectors().col(0);
        a3 = eig.eigenvectors().col(1);
        branch = "eigenvector";
    } else if (v1.norm() < tol::kStructural) {
        a3 = i_pauli_y() * v3;
        Eigen::Vector2d w = i_pauli_y() * (t13 * a3);
        a1 = w.norm() < tol::kStructural ? Eigen::Vector2d(1.0, 0.0) : w;
        branch = "partial";
    } else if (v3.norm() < tol::kStructural) {
        a1 = i_pauli_y() * v1;
        Eigen::Vector2d w = i_pauli_y() * (t13.transpose() * a1);
        a3 = w.norm() < tol::kStructural ? Eigen::Vector2d(1.0, 0.0) : w;
        branch = "partial";
    } else {
        a1 = i_pauli_y() * v1;
        a3 = i_pauli_y() * v3;
    }

    std::vector<double> angles{*angle_of(a1), *angle_of(a2), *angle_of(a3)};
    AxisAssignment axes({frame.axis_at(angles[0]), frame.axis_at(angles[1]), frame.axis_at(angles[2])});
    const double residual = hoc_residual(m, axes);
    if (residual >= fallback.feasibility_threshold) {
        return defer("closed-form residual " + std::to_string(residual) + " above threshold");
    }
    HocReport report;
    report.status = HocStatus::Feasible;
    report.axes = std::move(axes);
    report.residual = residual;
    report.planar_angles = std::move(angles);
    report.method = "planar-three-qubit (" + branch + " branch)";
    return report;
}

std::vector<double> covariance_terms(const StateVector &probe, const Generator &generator,
                                     const AxisAssignment &axes, const CMatrix &unitary) {
    const int n = probe.nqubits();
    const Eigen::Index dim = probe.dim();
    require(axes.nqubits() == n, "axis count does not match the probe");
    require(generator.matrix.rows() == dim && generator.matrix.cols() == dim, "generator dimension mismatch");
    require(unitary.rows() == dim && unitary.cols() == dim, "unitary dimension mismatch");
    if (!is_unitary(unitary, 1e-10)) {
        fail(ErrorKind::Contract, "covariance_check needs a unitary encoding operator");
    }
    const CVector &psi0 = probe.amplitudes();
    const CVector g_psi0 = generator.matrix * psi0;
    const double mean_g = psi0.dot(g_psi0).real();
    CVector phi = unitary * psi0;
    CVector chi = unitary * g_psi0;
    for (int j = 1; j <= n; ++j) {
        Mat2 ud = axis_basis(axes.axis(j)).adjoint();
        apply_local_inplace(phi, j, n, ud);
        apply_local_inplace(chi, j, n, ud);
    }
    std::vector<Complex> cross(static_cast<size_t>(dim));
    std::vector<Complex> weight(static_cast<size_t>(dim));
    for (Eigen::Index x = 0; x < dim; ++x) {
        cross[static_cast<size_t>(x)] = std::conj(phi[x]) * chi[x];
        weight[static_cast<size_t>(x)] = std::norm(phi[x]);
    }
    walsh_hadamard_inplace(cross);
    walsh_hadamard_inplace(weight);
    std::vector<double> out(static_cast<size_t>(dim));
    for (size_t a = 0; a < out.size(); ++a) {
        out[a] = cross[a].real() - weight[a].real() * mean_g;
    }
    return out;
}

double covariance_check(const StateVector &probe, const Generator &generator, const AxisAssignment &axes,
                        const CMatrix &unitary) {
    auto terms = covariance_terms(probe, generator, axes, unitary);
    double worst = 0.0;
    for (size_t a = 1; a < terms.size(); ++a) {
        worst = std::max(worst, std::abs(terms[a]));
    }
    return worst;
}

namespace {

std::string describe(const PairConstraint &c) {
    std::ostringstream os;
    const double mag = std::hypot(c.cos_coeff, c.sin_coeff);
    auto diff = "(b" + std::to_string(c.j) + " - b" + std::to_string(c.k) + ")";
    if (std::abs(c.sin_coeff) <= 1e-9 * mag) {
        os << "cos" << diff << " = 0";
    } else if (std::abs(c.cos_coeff) <= 1e-9 * mag) {
        os << "sin" << diff << " = 0";
    } else {
        os.precision(6);
        os << c.cos_coeff << " cos" << diff << " + " << c.sin_coeff << " sin" << diff << " = 0";
    }
    return os.str();
}

}  // namespace

std::optional<PlanarCertificate> planar_pair_certificate(const StateVector &probe, const Generator &generator,
                                                         const CMatrix &unitary, const MMatrix &m) {
    const int n = probe.nqubits();
    require(m.nqubits() == n, "M dimension does not match the probe");
    if (n < 3 || m.is_trivial()) {
        return std::nullopt;
    }
    const double scale = m_scale(m);
    auto mv = single_qubit_plane_vectors(m);
    for (const auto &v : mv) {
        if (v.norm() <= 1e-8 * scale) {
            return std::nullopt;
        }
    }
    const BlochVector common = mv[0].normalized();
    for (const auto &v : mv) {
        if (v.normalized().cross(common).norm() > 1e-8) {
            return std::nullopt;
        }
    }
    const PlanarFrame frame = PlanarFrame::perpendicular_to(common);
    const BlochVector e[2] = {frame.e1, frame.e2};

    // Pair coefficient matrices C_jk(a, b) = Cov((e_a.s)_j (e_b.s)_k, G); a
    // covariance of a single pair term is read off the alpha = {j, k} slot.
    std::vector<std::vector<Eigen::Matrix2d>> c(static_cast<size_t>(n),
                                                std::vector<Eigen::Matrix2d>(static_cast<size_t>(n)));
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int j = 1; j <= n; ++j) {
                for (int k = j + 1; k <= n; ++k) {
                    std::vector<BlochVector> axes(static_cast<size_t>(n), BlochVector::UnitZ());
                    axes[static_cast<size_t>(j - 1)] = e[a];
                    axes[static_cast<size_t>(k - 1)] = e[b];
                    auto terms = covariance_terms(probe, generator, AxisAssignment(axes), unitary);
                    size_t alpha = (size_t{1} << (n - j)) | (size_t{1} << (n - k));
                    c[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)](a, b) = terms[alpha];
                }
            }
        }
    }

    PlanarCertificate cert;
    const double cov_scale = std::max(1e-300, scale);
    std::vector<std::vector<std::optional<double>>> offset(static_cast<size_t>(n),
                                                           std::vector<std::optional<double>>(static_cast<size_t>(n)));
    for (int j = 1; j <= n; ++j) {
        for (int k = j + 1; k <= n; ++k) {
            const Eigen::Matrix2d &cm = c[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)];
            // cm = a I + b [[0,1],[-1,0]] + symmetric traceless part.
            PairConstraint pc;
            pc.j = j;
            pc.k = k;
            const double a = 0.5 * (cm(0, 0) + cm(1, 1));
            const double b = 0.5 * (cm(0, 1) - cm(1, 0));
            pc.non_difference_part = std::hypot(0.5 * (cm(0, 0) - cm(1, 1)), 0.5 * (cm(0, 1) + cm(1, 0)));
            // (cos bj, sin bj) cm (cos bk, sin bk)^T = a cos(bj-bk) - b sin(bj-bk)
            pc.cos_coeff = a;
            pc.sin_coeff = -b;
            cert.pairs.push_back(pc);
            const double mag = std::hypot(a, b);
            if (pc.non_difference_part > 1e-9 * std::max(mag, 1e-12) || mag <= 1e-12 * cov_scale) {
                continue;
            }
            // a cos(d) - b sin(d) = 0  <=>  d = atan2(a, b) (mod pi)
            offset[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] = std::atan2(a, b);
        }
    }

    std::ostringstream note;
    note << "all qubits confined to the plane normal to (" << common.x() << ", " << common.y() << ", "
         << common.z() << "); pair conditions:";
    for (const auto &pc : cert.pairs) {
        note << " " << describe(pc) << ";";
    }
    for (int j = 0; j < n && !cert.infeasible; ++j) {
        for (int k = j + 1; k < n && !cert.infeasible; ++k) {
            for (int l = k + 1; l < n && !cert.infeasible; ++l) {
                const auto &djk = offset[static_cast<size_t>(j)][static_cast<size_t>(k)];
                const auto &dkl = offset[static_cast<size_t>(k)][static_cast<size_t>(l)];
                const auto &djl = offset[static_cast<size_t>(j)][static_cast<size_t>(l)];
                if (!djk || !dkl || !djl) {
                    continue;
                }
                const double mismatch = std::remainder(*djk + *dkl - *djl, std::numbers::pi);
                if (std::abs(mismatch) > 1e-6) {
                    cert.infeasible = true;
                    note << " qubits " << j + 1 << "," << k + 1 << "," << l + 1
                         << " fix b" << j + 1 << "-b" << l + 1 << " two incompatible ways (mod pi), so no local "
                         << "measurement satisfies the second-order conditions";
                }
            }
        }
    }
    if (!cert.infeasible) {
        note << " consistent";
    }
    cert.note = note.str();
    return cert;
}

}  // namespace qlocal
