#include "qrdmft/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <arpack/arpack.hpp>

namespace qrdmft {

namespace {

Eigenpair dense_lowest(const SparseMatrixXcd& h) {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  Eigenpair r;
  r.value = es.eigenvalues()[0];
  r.vector = es.eigenvectors().col(0);
  if (m.rows() > 1) r.gap = es.eigenvalues()[1] - es.eigenvalues()[0];
  return r;
}

}  // namespace

Eigenpair lowest_eigenpair(const SparseMatrixXcd& h, const EigenOptions& options) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) throw std::invalid_argument("lowest_eigenpair needs a non-empty square matrix");
  if (static_cast<std::size_t>(n) <= options.dense_limit) return dense_lowest(h);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(normal(rng), normal(rng));
  v.normalize();
  if (options.start.size() == n && options.start.norm() > 0.0) v = (options.start.normalized() + 1e-3 * v).normalized();

  const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(options.krylov_dim), n);
  Eigen::MatrixXcd q(n, m);
  Eigenpair best;
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    q.col(0) = v;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXcd w = h * q.col(k);
      alpha[k] = q.col(k).dot(w).real();
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
      const double b = w.norm();
      if (k + 1 == m) break;
      beta[k] = b;
      if (b < 1e-13) break;
      q.col(k + 1) = w / b;
    }
    const Eigen::Index used = std::min<Eigen::Index>(k + 1, m);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
    for (Eigen::Index i = 0; i < used; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    v = q.leftCols(used) * y.cast<Complex>();
    v.normalize();
    const Eigen::VectorXcd hv = h * v;
    const double e = v.dot(hv).real();
    const double residual = (hv - e * v).norm();
    best.value = e;
    best.vector = v;
    if (residual <= options.residual_tol * std::max(1.0, std::abs(e)) || used < m) return best;
  }
  throw std::runtime_error("Lanczos did not converge");
}

Eigenpairs lowest_eigenpairs(const SparseMatrixXcd& h, std::size_t count, const EigenOptions& options) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) throw std::invalid_argument("lowest_eigenpairs needs a non-empty square matrix");
  const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max<std::size_t>(count, 1)), n);
  Eigenpairs out;
  if (static_cast<std::size_t>(n) <= options.dense_limit || k + 2 >= n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(h)};
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    return out;
  }

  namespace ap = arpack::internal;
  using CC = double _Complex;
  const a_int nn = static_cast<a_int>(n);
  const a_int nev = static_cast<a_int>(k);
  const a_int ncv = static_cast<a_int>(std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * k + 10, 30)));
  const a_int lworkl = 3 * ncv * ncv + 5 * ncv;
  Eigen::VectorXcd resid(n);
  a_int info = 0;
  if (options.start.size() == n && options.start.norm() > 0.0) {
    resid = options.start;
    info = 1;
  }
  Eigen::MatrixXcd v(n, ncv);
  std::vector<Complex> workd(static_cast<std::size_t>(3 * n)), workl(static_cast<std::size_t>(lworkl));
  std::vector<double> rwork(static_cast<std::size_t>(ncv));
  a_int iparam[11] = {1, 0, static_cast<a_int>(300 * std::max<std::size_t>(1, options.max_restarts)), 1, 0, 0, 1};
  a_int ipntr[14] = {};
  a_int ido = 0;
  const double tol = options.residual_tol;
  auto cc = [](Complex* p) { return reinterpret_cast<CC*>(p); };
  for (;;) {
    ap::znaupd_c(&ido, "I", nn, "SR", nev, tol, cc(resid.data()), ncv, cc(v.data()), nn, iparam, ipntr,
                 cc(workd.data()), cc(workl.data()), lworkl, rwork.data(), &info);
    if (ido != -1 && ido != 1) break;
    Eigen::Map<const Eigen::VectorXcd> x(workd.data() + ipntr[0] - 1, n);
    Eigen::Map<Eigen::VectorXcd> y(workd.data() + ipntr[1] - 1, n);
    y.noalias() = h * x;
  }
  if (info < 0) throw std::runtime_error("ARPACK znaupd failed with code " + std::to_string(info));
  if (info == 1) throw std::runtime_error("ARPACK reached its iteration limit");

  std::vector<a_int> select(static_cast<std::size_t>(ncv));
  Eigen::VectorXcd d(nev + 1);
  Eigen::MatrixXcd z(n, nev);
  std::vector<Complex> workev(static_cast<std::size_t>(2 * ncv));
  Complex sigma = 0.0;
  ap::zneupd_c(1, "A", select.data(), cc(d.data()), cc(z.data()), nn, *cc(&sigma), cc(workev.data()), "I", nn, "SR",
               nev, tol, cc(resid.data()), ncv, cc(v.data()), nn, iparam, ipntr, cc(workd.data()), cc(workl.data()),
               lworkl, rwork.data(), &info);
  if (info != 0) throw std::runtime_error("ARPACK zneupd failed with code " + std::to_string(info));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(nev));
  for (Eigen::Index i = 0; i < nev; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d[a].real() < d[b].real(); });
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = order[static_cast<std::size_t>(i)];
    out.vectors.col(i) = z.col(j).normalized();
    out.values[i] = out.vectors.col(i).dot(h * out.vectors.col(i)).real();
  }
  return out;
}

Eigen::VectorXd lowest_eigenvalues(const SparseMatrixXcd& h, std::size_t count) {
  if (h.rows() > 4096) throw std::invalid_argument("lowest_eigenvalues is limited to dimension 4096");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(std::min<Eigen::Index>(static_cast<Eigen::Index>(count), h.rows()));
}

}  // namespace qrdmft
