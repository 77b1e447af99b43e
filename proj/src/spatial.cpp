#include "spall/spatial.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "spall/errors.hpp"

namespace spall {

SpatialGrid::SpatialGrid(int n_interior) : n_(n_interior) {
  if (n_interior < 1) throw DomainError("SpatialGrid: need at least one point");
}

RealVector SpatialGrid::points() const {
  RealVector x(n_);
  for (int j = 0; j < n_; ++j) x(j) = point(j);
  return x;
}

double dirichlet_eigenvalue(int n) {
  const double k = n * std::numbers::pi / 2.0;
  return -k * k;
}

StateField::StateField(SpatialGrid g, ComplexVector v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw DomainError("StateField: expected " + std::to_string(grid.size()) +
                      " values, got " + std::to_string(values.size()));
}

StateField StateField::zero(SpatialGrid g) {
  return StateField(g, ComplexVector::Zero(g.size()));
}

StateField StateField::from_real(SpatialGrid g, const RealVector& v) {
  return StateField(g, v.cast<Complex>());
}

StateField StateField::conjugate() const {
  return StateField(grid, values.conjugate());
}

ModeVector ModeVector::basis(int size, int n, Complex scale) {
  if (n < 1 || n > size) throw DomainError("ModeVector::basis: bad index");
  ComplexVector c = ComplexVector::Zero(size);
  c(n - 1) = scale;
  return ModeVector(std::move(c));
}

// RODFT00 applied to the interleaved real and imaginary parts at once:
// Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / (N+1)).
struct SineTransform::Plan {
  fftw_plan plan = nullptr;
  explicit Plan(int n) {
    std::vector<double> in(2 * n), out(2 * n);
    fftw_r2r_kind kind = FFTW_RODFT00;
    plan = fftw_plan_many_r2r(1, &n, 2, in.data(), nullptr, 2, 1, out.data(),
                              nullptr, 2, 1, &kind,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw ComputationError("SineTransform: FFTW planning failed");
  }
  ~Plan() { fftw_destroy_plan(plan); }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

namespace {

std::shared_ptr<const SineTransform::Plan> cached_plan(int n);

}  // namespace

SineTransform::SineTransform(int n) : n_(n) {
  if (n < 1) throw DomainError("SineTransform: size must be positive");
  plan_ = cached_plan(n);
}

void SineTransform::forward(const ComplexVector& values,
                            ComplexVector& out) const {
  if (values.size() != n_) throw DomainError("SineTransform: length mismatch");
  out.resize(n_);
  fftw_execute_r2r(plan_->plan,
                   const_cast<double*>(reinterpret_cast<const double*>(values.data())),
                   reinterpret_cast<double*>(out.data()));
  out /= static_cast<double>(n_ + 1);
}

void SineTransform::inverse(const ComplexVector& coeffs,
                            ComplexVector& out) const {
  if (coeffs.size() != n_) throw DomainError("SineTransform: length mismatch");
  out.resize(n_);
  fftw_execute_r2r(plan_->plan,
                   const_cast<double*>(reinterpret_cast<const double*>(coeffs.data())),
                   reinterpret_cast<double*>(out.data()));
  out *= 0.5;
}

namespace {

std::shared_ptr<const SineTransform::Plan> cached_plan(int n) {
  // FFTW planning is not thread-safe; execution with new arrays is.
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SineTransform::Plan>> plans;
  std::lock_guard lock(mutex);
  auto& slot = plans[n];
  if (!slot) slot = std::make_shared<const SineTransform::Plan>(n);
  return slot;
}

}  // namespace

ModeVector to_modes(const StateField& f) {
  ComplexVector c;
  SineTransform(f.grid.size()).forward(f.values, c);
  return ModeVector(std::move(c));
}

StateField from_modes(const ModeVector& m, const SpatialGrid& grid) {
  if (m.size() != grid.size())
    throw DomainError("from_modes: " + std::to_string(m.size()) +
                      " modes for a grid of " + std::to_string(grid.size()));
  ComplexVector v;
  SineTransform(grid.size()).inverse(m.coeffs, v);
  return StateField(grid, std::move(v));
}

ModeVector laplacian(const ModeVector& m) {
  ComplexVector c = m.coeffs;
  for (int k = 0; k < c.size(); ++k) c(k) *= dirichlet_eigenvalue(k + 1);
  return ModeVector(std::move(c));
}

StateField dealias(const StateField& f) {
  const SineTransform dst(f.grid.size());
  ComplexVector c, out;
  dst.forward(f.values, c);
  c.tail(c.size() - f.grid.dealias_cutoff()).setZero();
  dst.inverse(c, out);
  return StateField(f.grid, std::move(out));
}

StateField square_dealiased(const StateField& f) {
  const SineTransform dst(f.grid.size());
  ComplexVector sq = f.values.array().square().matrix();
  ComplexVector c;
  dst.forward(sq, c);
  const int keep = f.grid.dealias_cutoff();
  c.tail(c.size() - keep).setZero();
  dst.inverse(c, sq);
  return StateField(f.grid, std::move(sq));
}

Norms norms(const StateField& f) {
  if (f.values.size() == 0) return {0.0, 0.0};
  const double sup = f.values.cwiseAbs().maxCoeff();
  const double l2 = std::sqrt(f.grid.spacing() * f.values.squaredNorm());
  return {sup, l2};
}

Complex pairing(const StateField& a, const StateField& b) {
  if (!(a.grid == b.grid)) throw DomainError("pairing: grid mismatch");
  return a.grid.spacing() * (a.values.array() * b.values.array()).sum();
}

}  // namespace spall
