#include "rbhp/rb_space.hpp"

#include <cmath>
#include <stdexcept>

namespace rbhp {

namespace {

constexpr double kDropTol = 1e-10;        // dependent-snapshot threshold
constexpr double kResidual2Floor = -1e-8; // corrupt offline data below this

// MGS projection of v against the first n columns of basis in the X-inner
// product, with one re-orthogonalization sweep.
void mgs_project(const SpMat& x, const Matrix& basis, int n, Vector& v) {
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int i = 0; i < n; ++i) {
            const double proj = basis.col(i).dot(x * v);
            v -= proj * basis.col(i);
        }
        if (n == 0) break;
    }
}

double x_norm(const SpMat& x, const Vector& v) { return std::sqrt(std::max(0.0, v.dot(x * v))); }

// extended-precision dot product for Gram-block entries; the online
// residual expansion cancels these against each other almost exactly, so
// their last digits matter
double xdot(const Vector& a, const Vector& b) {
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(acc);
}

}  // namespace

RBSpace RBSpace::create_empty(const AffineProblem& problem) {
    RBSpace s;
    s.qa_ = problem.q_a;
    s.qf_ = problem.q_f;
    s.g_ff_.resize(s.qf_, s.qf_);
    s.g_fa_.resize(s.qf_, 0);
    s.g_aa_.resize(0, 0);
    if (problem.has_truth()) {
        const Eigen::Index nt = problem.truth_dim();
        s.basis_.resize(nt, 0);
        s.op_basis_.resize(nt, 0);
        s.riesz_op_basis_.resize(nt, 0);
        s.riesz_f_.resize(nt, s.qf_);
        for (int q = 0; q < s.qf_; ++q) s.riesz_f_.col(q) = problem.riesz_solver().solve(problem.F_terms[static_cast<std::size_t>(q)]);
        for (int q = 0; q < s.qf_; ++q)
            for (int r = 0; r <= q; ++r) {
                const double val = xdot(problem.F_terms[static_cast<std::size_t>(q)], s.riesz_f_.col(r));
                s.g_ff_(q, r) = val;
                s.g_ff_(r, q) = val;
            }
        for (auto& a : problem.A_terms) {
            s.reduced_A_.push_back(Matrix(0, 0));
            (void)a;
        }
        for (int q = 0; q < s.qf_; ++q) s.reduced_F_.push_back(Vector(0));
    }
    return s;
}

RBSpace RBSpace::from_online_data(int q_a, int q_f, std::vector<Matrix> reduced_A, std::vector<Vector> reduced_F,
                                  Matrix g_ff, Matrix g_fa, Matrix g_aa) {
    RBSpace s;
    s.qa_ = q_a;
    s.qf_ = q_f;
    s.n_ = reduced_A.empty() ? 0 : static_cast<int>(reduced_A[0].rows());
    s.reduced_A_ = std::move(reduced_A);
    s.reduced_F_ = std::move(reduced_F);
    s.g_ff_ = std::move(g_ff);
    s.g_fa_ = std::move(g_fa);
    s.g_aa_ = std::move(g_aa);
    return s;
}

bool RBSpace::extend(const AffineProblem& problem, const Vector& snapshot, const Param& mu) {
    if (!problem.has_truth()) throw std::logic_error("RBSpace::extend: problem has no truth operators");
    const SpMat& x = problem.X.mat;

    Vector v = snapshot;
    const double norm0 = x_norm(x, v);
    if (norm0 == 0.0) return false;
    mgs_project(x, basis_, n_, v);
    const double norm1 = x_norm(x, v);
    if (norm1 < kDropTol * norm0) return false;
    v /= norm1;

    const int n_old = n_;
    const Eigen::Index nt = basis_.rows();

    // operator images and Riesz representers of the new basis vector
    Matrix az(nt, qa_), waz(nt, qa_);
    for (int q = 0; q < qa_; ++q) {
        az.col(q) = problem.A_terms[static_cast<std::size_t>(q)].mat * v;
        waz.col(q) = problem.riesz_solver().solve(az.col(q));
    }

    for (int q = 0; q < qa_; ++q) {
        Matrix& ra = reduced_A_[static_cast<std::size_t>(q)];
        ra.conservativeResize(n_old + 1, n_old + 1);
        for (int i = 0; i < n_old; ++i) ra(i, n_old) = basis_.col(i).dot(az.col(q));
        for (int j = 0; j < n_old; ++j) ra(n_old, j) = v.dot(op_basis_.col(j * qa_ + q));
        ra(n_old, n_old) = v.dot(az.col(q));
    }
    for (int q = 0; q < qf_; ++q) {
        Vector& rf = reduced_F_[static_cast<std::size_t>(q)];
        rf.conservativeResize(n_old + 1);
        rf(n_old) = v.dot(problem.F_terms[static_cast<std::size_t>(q)]);
    }

    g_fa_.conservativeResize(qf_, (n_old + 1) * qa_);
    for (int q = 0; q < qa_; ++q)
        for (int r = 0; r < qf_; ++r) g_fa_(r, n_old * qa_ + q) = xdot(riesz_f_.col(r), az.col(q));

    g_aa_.conservativeResize((n_old + 1) * qa_, (n_old + 1) * qa_);
    for (int q = 0; q < qa_; ++q) {
        const int idx = n_old * qa_ + q;
        for (int j = 0; j < n_old * qa_; ++j) {
            const double cross = xdot(op_basis_.col(j), waz.col(q));  // (A_{q'} xi_j, R_new)_X
            g_aa_(j, idx) = cross;
            g_aa_(idx, j) = cross;
        }
        for (int r = 0; r <= q; ++r) {
            const double val = xdot(az.col(r), waz.col(q));
            g_aa_(n_old * qa_ + r, idx) = val;
            g_aa_(idx, n_old * qa_ + r) = val;
        }
    }

    basis_.conservativeResize(nt, n_old + 1);
    basis_.col(n_old) = v;
    op_basis_.conservativeResize(nt, (n_old + 1) * qa_);
    riesz_op_basis_.conservativeResize(nt, (n_old + 1) * qa_);
    for (int q = 0; q < qa_; ++q) {
        op_basis_.col(n_old * qa_ + q) = az.col(q);
        riesz_op_basis_.col(n_old * qa_ + q) = waz.col(q);
    }
    selected_.push_back(mu);
    n_ = n_old + 1;
    return true;
}

RBSpace RBSpace::prefix(int m) const {
    if (m < 0 || m > n_) throw std::out_of_range("RBSpace::prefix");
    RBSpace s;
    s.n_ = m;
    s.qa_ = qa_;
    s.qf_ = qf_;
    s.g_ff_ = g_ff_;
    s.riesz_f_ = riesz_f_;
    s.selected_.assign(selected_.begin(), selected_.begin() + m);
    if (basis_.rows() > 0) {
        s.basis_ = basis_.leftCols(m);
        s.op_basis_ = op_basis_.leftCols(m * qa_);
        s.riesz_op_basis_ = riesz_op_basis_.leftCols(m * qa_);
    }
    for (const auto& ra : reduced_A_) s.reduced_A_.push_back(ra.topLeftCorner(m, m));
    for (const auto& rf : reduced_F_) s.reduced_F_.push_back(rf.head(m));
    s.g_fa_ = g_fa_.leftCols(m * qa_);
    s.g_aa_ = g_aa_.topLeftCorner(m * qa_, m * qa_);
    return s;
}

double RBSpace::orthonormality_defect(const AffineProblem& problem) const {
    if (n_ == 0) return 0.0;
    const Matrix gram = basis_.transpose() * (problem.X.mat * basis_);
    return (gram - Matrix::Identity(n_, n_)).cwiseAbs().maxCoeff();
}

Vector RBSpace::solve(const AffineProblem& problem, const Param& mu) const {
    auto [ta, tf] = theta_eval(problem, mu);
    if (n_ == 0) return Vector(0);
    Matrix a_mu = ta[0] * reduced_A_[0];
    for (int q = 1; q < qa_; ++q) a_mu += ta[static_cast<std::size_t>(q)] * reduced_A_[static_cast<std::size_t>(q)];
    Vector f_mu = tf[0] * reduced_F_[0];
    for (int q = 1; q < qf_; ++q) f_mu += tf[static_cast<std::size_t>(q)] * reduced_F_[static_cast<std::size_t>(q)];
    Eigen::PartialPivLU<Matrix> lu(a_mu);
    if (!(lu.rcond() > 1e-14)) throw SolveFailure("rb_solve: near-singular reduced system");
    return lu.solve(f_mu);
}

double RBSpace::residual_norm(const AffineProblem& problem, const Param& mu, const Vector& coeffs) const {
    if (coeffs.size() != n_) throw std::invalid_argument("residual_norm: coefficient size mismatch");
    auto [ta, tf] = theta_eval(problem, mu);

    // extended-precision accumulation: the expansion cancels almost fully
    // near snapshot parameters and plain double summation costs digits there
    long double r2 = 0.0L;
    for (int q = 0; q < qf_; ++q)
        for (int r = 0; r < qf_; ++r)
            r2 += static_cast<long double>(tf[static_cast<std::size_t>(q)]) * tf[static_cast<std::size_t>(r)] * g_ff_(q, r);
    if (n_ > 0) {
        Vector w(n_ * qa_);
        for (int i = 0; i < n_; ++i)
            for (int q = 0; q < qa_; ++q) w(i * qa_ + q) = ta[static_cast<std::size_t>(q)] * coeffs(i);
        for (int q = 0; q < qf_; ++q) {
            long double dot = 0.0L;
            for (int j = 0; j < w.size(); ++j) dot += static_cast<long double>(g_fa_(q, j)) * w(j);
            r2 -= 2.0L * tf[static_cast<std::size_t>(q)] * dot;
        }
        for (int i = 0; i < w.size(); ++i) {
            long double row = 0.0L;
            for (int j = 0; j < w.size(); ++j) row += static_cast<long double>(g_aa_(i, j)) * w(j);
            r2 += row * w(i);
        }
    }
    const auto r2d = static_cast<double>(r2);
    if (r2d < kResidual2Floor)
        throw std::runtime_error("residual_norm: squared norm below -1e-8, offline data corrupt");
    return std::sqrt(std::max(r2d, 0.0));
}

double RBSpace::estimate_error(const AffineProblem& problem, const Param& mu) const {
    const Vector c = (n_ > 0) ? solve(problem, mu) : Vector(0);
    return residual_norm(problem, mu, c) / problem.alpha_lb(mu);
}

Vector RBSpace::reconstruct(const Vector& coeffs) const {
    if (basis_.cols() != coeffs.size()) throw std::logic_error("RBSpace::reconstruct: no truth basis");
    return basis_ * coeffs;
}

std::pair<Matrix, std::vector<std::size_t>> orthonormalize(const std::vector<Vector>& snapshots,
                                                           const OperatorMatrix& X) {
    std::vector<std::size_t> kept;
    if (snapshots.empty()) return {Matrix(0, 0), kept};
    const Eigen::Index nt = snapshots[0].size();
    Matrix z(nt, 0);
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        Vector v = snapshots[s];
        const double norm0 = x_norm(X.mat, v);
        if (norm0 == 0.0) continue;
        mgs_project(X.mat, z, static_cast<int>(z.cols()), v);
        const double norm1 = x_norm(X.mat, v);
        if (norm1 < kDropTol * norm0) continue;
        z.conservativeResize(nt, z.cols() + 1);
        z.col(z.cols() - 1) = v / norm1;
        kept.push_back(s);
    }
    return {std::move(z), std::move(kept)};
}

RBSpace project_reduced(const AffineProblem& problem, const Matrix& basis) {
    RBSpace s = RBSpace::create_empty(problem);
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        if (!s.extend(problem, basis.col(i)))
            throw std::invalid_argument("project_reduced: basis columns not independent");
    }
    return s;
}

Vector rb_solve(const RBSpace& space, const AffineProblem& problem, const Param& mu) {
    if (space.size() < 1) throw std::logic_error("rb_solve: empty space");
    return space.solve(problem, mu);
}

double residual_norm(const RBSpace& space, const AffineProblem& problem, const Param& mu, const Vector& coeffs) {
    return space.residual_norm(problem, mu, coeffs);
}

double error_estimator(const RBSpace& space, const AffineProblem& problem, const Param& mu) {
    return space.estimate_error(problem, mu);
}

double true_error(const AffineProblem& problem, const RBSpace& space, const Param& mu) {
    const Vector u = truth_solve(problem, mu);
    const Vector c = space.solve(problem, mu);
    const Vector e = u - space.reconstruct(c);
    return x_norm(problem.X.mat, e);
}

}  // namespace rbhp
