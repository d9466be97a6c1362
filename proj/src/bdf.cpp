#include "vmfem/solver.hpp"

#include <string>

namespace vmfem {

std::vector<double> bdf_coefficients(int order) {
  switch (order) {
  case 1:
    return {1.0, -1.0};
  case 2:
    return {1.5, -2.0, 0.5};
  case 3:
    return {11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0};
  case 4:
    return {25.0 / 12.0, -4.0, 3.0, -4.0 / 3.0, 0.25};
  case 5:
    return {137.0 / 60.0, -5.0, 5.0, -10.0 / 3.0, 1.25, -0.2};
  default:
    throw InvalidArgument("BDF order must be in 1..5, got " + std::to_string(order));
  }
}

BdfIntegrator::BdfIntegrator(TransientSystem& system, BdfOptions options)
    : system_(system), options_(std::move(options)) {
  if (options_.max_order < 1 || options_.max_order > 5) throw InvalidArgument("BDF order must be in 1..5");
  if (!(options_.dt > 0.0)) throw InvalidArgument("time step must be positive");
  options_.newton.validate();
}

void BdfIntegrator::initialize(const Eigen::VectorXd& x0, double t0, std::vector<Eigen::VectorXd> past) {
  if (x0.size() != system_.size()) throw InvalidArgument("initial state has the wrong size");
  history_.clear();
  history_.push_back(x0);
  for (auto& p : past) {
    if (p.size() != x0.size()) throw InvalidArgument("past state has the wrong size");
    if (static_cast<int>(history_.size()) >= options_.max_order) break;
    history_.push_back(std::move(p));
  }
  time_ = t0;
  steps_ = 0;
  last_order_ = 0;
  workspace_ = NewtonWorkspace{};
}

int BdfIntegrator::next_order() const {
  return std::min<int>(options_.max_order, static_cast<int>(history_.size()));
}

NewtonReport BdfIntegrator::advance() {
  if (history_.empty()) throw InvalidArgument("integrator not initialized");
  const int order = next_order();
  StepContext ctx;
  ctx.time = time_ + options_.dt;
  ctx.dt = options_.dt;
  ctx.alpha = bdf_coefficients(order);
  for (int i = 0; i < order; ++i) ctx.history.push_back(&history_[i]);
  system_.set_step(ctx);

  // The factorization depends on alpha_0 / dt; drop it when the order changes.
  if (order != last_order_) workspace_.lu = SparseLU{};
  Eigen::VectorXd x = history_.front();
  NewtonReport report;
  try {
    report = newton_solve(system_, x, options_.newton, &workspace_);
  } catch (const NonConvergence& e) {
    throw NonConvergence(std::string(e.what()) + " at t = " + std::to_string(ctx.time), e.last_iterate(),
                         e.report());
  }
  history_.push_front(std::move(x));
  while (static_cast<int>(history_.size()) > options_.max_order) history_.pop_back();
  time_ = ctx.time;
  ++steps_;
  last_order_ = order;
  return report;
}

} // namespace vmfem
