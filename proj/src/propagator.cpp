#include <rtnwalk/propagator.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <rtnwalk/errors.hpp>

namespace rtnwalk {

namespace {

// Largest ||A t|| for which a degree-m Taylor polynomial meets a backward
// error of 2^-53 (Al-Mohy & Higham, double precision).
constexpr std::array<std::pair<int, double>, 35> kTheta = {{
    {1, 2.29e-16}, {2, 2.58e-8}, {3, 1.39e-5}, {4, 3.40e-4}, {5, 2.40e-3},
    {6, 9.07e-3},  {7, 2.38e-2}, {8, 5.00e-2}, {9, 8.96e-2}, {10, 1.44e-1},
    {11, 2.14e-1}, {12, 3.00e-1}, {13, 4.00e-1}, {14, 5.14e-1}, {15, 6.41e-1},
    {16, 7.81e-1}, {17, 9.31e-1}, {18, 1.09},   {19, 1.26},   {20, 1.44},
    {21, 1.62},    {22, 1.82},   {23, 2.01},   {24, 2.22},   {25, 2.43},
    {26, 2.64},    {27, 2.86},   {28, 3.08},   {29, 3.31},   {30, 3.54},
    {35, 4.7},     {40, 6.0},    {45, 7.2},    {50, 8.5},    {55, 9.9},
}};

struct TaylorPlan
{
    int degree = 0;
    double substeps = 1.0;
};

TaylorPlan plan_taylor(double norm_t, int max_degree)
{
    TaylorPlan best;
    if (norm_t == 0.0)
        return best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (auto [m, theta] : kTheta) {
        if (m > max_degree)
            break;
        const double s = std::max(1.0, std::ceil(norm_t / theta));
        const double cost = m * s;
        if (cost < best_cost) {
            best_cost = cost;
            best = {m, s};
        }
    }
    return best;
}

template <class Scalar>
double inf_norm(const Vector<Scalar>& x)
{
    return x.size() == 0 ? 0.0 : x.template lpNorm<Eigen::Infinity>();
}

template <class Scalar>
bool all_finite(const Vector<Scalar>& x)
{
    return x.allFinite();
}

/*
 * Truncated Taylor series with s substeps. `apply(x, y)` sets y = A x for the
 * unshifted matrix; the shift is folded back in through eta = e^{shift t/s}.
 */
template <class Scalar, class Apply>
Vector<Scalar> taylor_action(Apply&& apply, Eigen::Index n, double shift, double norm,
                             double t, const Vector<Scalar>& v, double tol, int max_degree,
                             std::size_t max_matvecs)
{
    const TaylorPlan plan = plan_taylor(norm * std::abs(t), max_degree);
    if (plan.degree == 0)
        return v * std::exp(shift * t);
    if (plan.degree * plan.substeps > static_cast<double>(max_matvecs))
        throw ConvergenceError("Taylor action needs " +
                                   std::to_string(plan.degree * plan.substeps) +
                                   " matrix-vector products, budget is " +
                                   std::to_string(max_matvecs),
                               std::numeric_limits<double>::infinity());

    const auto s = static_cast<long long>(plan.substeps);
    const double h = t / static_cast<double>(s);
    const double eta = std::exp(shift * h);

    Vector<Scalar> f = v;
    Vector<Scalar> b = v;
    Vector<Scalar> ab(n);
    for (long long step = 0; step < s; ++step) {
        double c1 = inf_norm(b);
        for (int j = 1; j <= plan.degree; ++j) {
            apply(b, ab);
            ab -= shift * b;
            b = ab * (h / j);
            f += b;
            const double c2 = inf_norm(b);
            if (c1 + c2 <= tol * inf_norm(f))
                break;
            c1 = c2;
        }
        f *= eta;
        if (!all_finite(f))
            throw ConvergenceError("Taylor action produced non-finite values",
                                   std::numeric_limits<double>::infinity());
        b = f;
    }
    return f;
}

template <class Scalar>
using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
std::pair<double, double> dense_shift_and_norm(const Dense<Scalar>& a)
{
    const double shift = a.rows() == 0 ? 0.0 : std::real(a.trace()) / a.rows();
    Dense<Scalar> shifted = a;
    shifted.diagonal().array() -= shift;
    const double norm = shifted.cwiseAbs().colwise().sum().maxCoeff();
    return {shift, norm};
}

/// exp(h t) e_0 for a small dense matrix, to working precision.
template <class Scalar>
Vector<Scalar> small_exp_first_column(const Dense<Scalar>& h, double t)
{
    const auto [shift, norm] = dense_shift_and_norm(h);
    Vector<Scalar> e0 = Vector<Scalar>::Zero(h.rows());
    e0(0) = Scalar(1);
    auto apply = [&h](const Vector<Scalar>& x, Vector<Scalar>& y) { y.noalias() = h * x; };
    return taylor_action<Scalar>(apply, h.rows(), shift, norm, t, e0, 1e-17, 55,
                                 std::numeric_limits<std::size_t>::max());
}

/// Round x to two significant digits upwards, as in Expokit's step control.
double round_step(double x)
{
    const double s = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
    return std::ceil(x / s) * s;
}

/*
 * Arnoldi-projected exponential with adaptive sub-steps. The acceptance test
 * on each sub-step asks for a local error below tolerance * ||w|| scaled by
 * the fraction of the interval the sub-step covers.
 */
template <class Scalar>
Vector<Scalar> krylov_action(const SparseMatrix<Scalar>& a, double shift, double anorm,
                             double t, const Vector<Scalar>& v, const ActionOptions& opts)
{
    const Eigen::Index n = v.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(opts.krylov_dim, n));
    const double t_out = std::abs(t);
    const double sgn = t < 0 ? -1.0 : 1.0;
    const double tol = opts.tolerance;
    constexpr double gamma = 0.9;
    constexpr double delta = 1.2;
    constexpr int max_reject = 10;
    const double btol = 1e-2 * tol / std::max(1.0, t_out);
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();

    double beta = v.norm();
    if (beta == 0.0)
        return v;

    const double fact = std::pow((m + 1) / std::numbers::e, m + 1) *
                        std::sqrt(2.0 * std::numbers::pi * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * t_out * anorm), 1.0 / m);
    t_new = round_step(t_new);

    Vector<Scalar> w = v;
    Dense<Scalar> basis(n, m + 1);
    Dense<Scalar> hess(m + 2, m + 2);
    Vector<Scalar> p(n);
    std::size_t matvecs = 0;
    double t_now = 0.0;

    while (t_now < t_out) {
        double t_step = std::min(t_out - t_now, t_new);
        basis.setZero();
        hess.setZero();
        basis.col(0) = w / beta;

        int mb = m;
        int k1 = 2;
        for (int j = 0; j < m; ++j) {
            p.noalias() = a * basis.col(j);
            p -= shift * basis.col(j);
            ++matvecs;
            for (int i = 0; i <= j; ++i) {
                const Scalar hij = basis.col(i).dot(p);
                hess(i, j) = hij;
                p -= hij * basis.col(i);
            }
            const double s = p.norm();
            if (s < btol) {
                k1 = 0;
                mb = j + 1;
                t_step = t_out - t_now;
                break;
            }
            hess(j + 1, j) = s;
            basis.col(j + 1) = p / s;
        }
        double avnorm = 0.0;
        if (k1 != 0) {
            hess(m + 1, m) = Scalar(1);
            p.noalias() = a * basis.col(m);
            p -= shift * basis.col(m);
            ++matvecs;
            avnorm = p.norm();
        }

        // Error target for this sub-step relative to the current norm.
        const double tol_step = tol / t_out;
        double err_loc = 0.0;
        double xm = 1.0 / m;
        Vector<Scalar> f;
        int rejects = 0;
        for (;;) {
            const int mx = mb + k1;
            f = small_exp_first_column<Scalar>(hess.topLeftCorner(mx, mx), sgn * t_step);
            if (k1 == 0) {
                err_loc = btol;
                break;
            }
            const double phi1 = std::abs(f(m));
            const double phi2 = std::abs(f(m + 1) * avnorm);
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = (phi1 * phi2) / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / std::max(1, m - 1);
            }
            if (err_loc <= delta * t_step * tol_step)
                break;
            if (++rejects > max_reject)
                throw ConvergenceError("Krylov step size control rejected too many steps",
                                       err_loc);
            t_step = gamma * t_step * std::pow(t_step * tol_step / err_loc, xm);
            t_step = round_step(t_step);
        }

        const int mx = mb + std::max(0, k1 - 1);
        w = basis.leftCols(mx) * (f.head(mx) * (beta * std::exp(shift * sgn * t_step)));
        beta = w.norm();
        if (!w.allFinite())
            throw ConvergenceError("Krylov action produced non-finite values", err_loc);
        if (matvecs > opts.max_matvecs)
            throw ConvergenceError("Krylov action exceeded the matrix-vector budget of " +
                                       std::to_string(opts.max_matvecs),
                                   err_loc);

        t_now += t_step;
        if (beta == 0.0)
            break;
        t_new = gamma * t_step * std::pow(t_step * tol_step / std::max(err_loc, rndoff), xm);
        t_new = round_step(t_new);
    }
    return w;
}

} // namespace

void ActionOptions::validate() const
{
    if (!(tolerance > 0.0))
        throw InvalidArgument("propagation tolerance must be positive");
    if (max_degree < 1)
        throw InvalidArgument("Taylor degree bound must be at least 1");
    if (krylov_dim < 2)
        throw InvalidArgument("Krylov dimension must be at least 2");
    if (norm && !(*norm >= 0.0))
        throw InvalidArgument("norm estimate must be nonnegative");
}

template <class Scalar>
double one_norm(const SparseMatrix<Scalar>& a)
{
    RealVector col = RealVector::Zero(a.cols());
    for (Eigen::Index r = 0; r < a.outerSize(); ++r)
        for (typename SparseMatrix<Scalar>::InnerIterator it(a, r); it; ++it)
            col(it.col()) += std::abs(it.value());
    return a.cols() == 0 ? 0.0 : col.maxCoeff();
}

template <class Scalar>
std::pair<double, double> shift_and_norm(const SparseMatrix<Scalar>& a)
{
    const Eigen::Index n = a.rows();
    if (n == 0)
        return {0.0, 0.0};
    double trace = 0.0;
    RealVector col = RealVector::Zero(a.cols());
    RealVector diag = RealVector::Zero(n);
    std::vector<Scalar> diag_value(static_cast<std::size_t>(n), Scalar(0));
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        for (typename SparseMatrix<Scalar>::InnerIterator it(a, r); it; ++it) {
            if (it.col() == it.row()) {
                trace += std::real(it.value());
                diag_value[static_cast<std::size_t>(it.row())] += it.value();
            } else {
                col(it.col()) += std::abs(it.value());
            }
        }
    }
    const double shift = trace / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i)
        col(i) += std::abs(diag_value[static_cast<std::size_t>(i)] - shift);
    return {shift, col.maxCoeff()};
}

template <class Scalar>
Vector<Scalar> expm_action(const SparseMatrix<Scalar>& a, double t, const Vector<Scalar>& v,
                           const ActionOptions& opts)
{
    opts.validate();
    if (a.rows() != a.cols())
        throw InvalidArgument("exponential action needs a square matrix");
    if (a.cols() != v.size())
        throw InvalidArgument("vector length " + std::to_string(v.size()) +
                              " does not match matrix dimension " + std::to_string(a.cols()));
    if (!std::isfinite(t))
        throw InvalidArgument("propagation time must be finite");
    if (t == 0.0)
        return v;

    double shift = 0.0;
    double norm = 0.0;
    if (opts.shift && opts.norm) {
        shift = *opts.shift;
        norm = *opts.norm;
    } else {
        std::tie(shift, norm) = shift_and_norm(a);
    }
    if (norm == 0.0)
        return shift == 0.0 ? v : Vector<Scalar>(v * std::exp(shift * t));

    if (opts.method == ActionMethod::krylov)
        return krylov_action(a, shift, norm, t, v, opts);

    auto apply = [&a](const Vector<Scalar>& x, Vector<Scalar>& y) { y.noalias() = a * x; };
    return taylor_action<Scalar>(apply, a.rows(), shift, norm, t, v, opts.tolerance,
                                 opts.max_degree, opts.max_matvecs);
}

template <class Scalar>
std::vector<Vector<Scalar>> expm_action_grid(const SparseMatrix<Scalar>& a,
                                             std::span<const double> times,
                                             const Vector<Scalar>& v, const ActionOptions& opts)
{
    double previous = 0.0;
    for (double t : times) {
        if (!std::isfinite(t) || t < 0.0)
            throw InvalidArgument("time grid must be finite and nonnegative");
        if (t < previous)
            throw InvalidArgument("time grid must be ascending");
        previous = t;
    }

    ActionOptions cached = opts;
    if (!cached.shift || !cached.norm) {
        const auto [shift, norm] = shift_and_norm(a);
        cached.shift = shift;
        cached.norm = norm;
    }

    std::vector<Vector<Scalar>> out;
    out.reserve(times.size());
    Vector<Scalar> w = v;
    previous = 0.0;
    for (double t : times) {
        w = expm_action(a, t - previous, w, cached);
        out.push_back(w);
        previous = t;
    }
    return out;
}

template double one_norm(const SparseMatrix<double>&);
template double one_norm(const SparseMatrix<Complex>&);
template std::pair<double, double> shift_and_norm(const SparseMatrix<double>&);
template std::pair<double, double> shift_and_norm(const SparseMatrix<Complex>&);
template Vector<double> expm_action(const SparseMatrix<double>&, double, const Vector<double>&,
                                    const ActionOptions&);
template Vector<Complex> expm_action(const SparseMatrix<Complex>&, double,
                                     const Vector<Complex>&, const ActionOptions&);
template std::vector<Vector<double>> expm_action_grid(const SparseMatrix<double>&,
                                                      std::span<const double>,
                                                      const Vector<double>&,
                                                      const ActionOptions&);
template std::vector<Vector<Complex>> expm_action_grid(const SparseMatrix<Complex>&,
                                                       std::span<const double>,
                                                       const Vector<Complex>&,
                                                       const ActionOptions&);

} // namespace rtnwalk
