#include "vmfem/forms.hpp"

#include "vmfem/detail/mixed_assembler.hpp"

namespace vmfem {

Eigen::VectorXd join_state(const StateLayout& layout, const Eigen::VectorXd& a, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& T) {
  if (a.size() != layout.scalar || T.size() != layout.scalar || u.size() != layout.velocity)
    throw InvalidArgument("join_state: block sizes do not match the layout");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.size());
  x.segment(0, layout.scalar) = a;
  x.segment(layout.offset_u(), layout.velocity) = u;
  x.segment(layout.offset_T(), layout.scalar) = T;
  return x;
}

MixedForm::MixedForm(std::shared_ptr<const TaylorHoodSpaces> spaces, int quad_degree, int extras,
                     std::vector<DirichletCondition> bcs, SourceTerms sources)
    : spaces_(std::move(spaces)), bcs_(std::move(bcs)), sources_(std::move(sources)) {
  if (!spaces_) throw InvalidArgument("null function spaces");
  const int k = spaces_->degree();
  if (quad_degree <= 0) quad_degree = 3 * (k + 1);
  engine_ = std::make_unique<detail::MixedAssembler>(*spaces_, quad_degree, extras);

  std::vector<int> constrained;
  for (const auto& bc : bcs_) {
    const FunctionSpace& space = bc.field == Field::Velocity      ? spaces_->velocity
                                 : bc.field == Field::Temperature ? spaces_->temperature
                                                                  : spaces_->density;
    if (bc.field == Field::Velocity ? !bc.vector : !bc.scalar)
      throw InvalidArgument("Dirichlet condition without data for its field");
    const int offset = bc.field == Field::Velocity      ? engine_->offset_u()
                       : bc.field == Field::Temperature ? engine_->offset_T()
                                                        : 0;
    std::vector<std::string> tags = bc.tags;
    if (tags.empty()) tags.emplace_back();
    for (const auto& tag : tags) {
      if (!tag.empty() && space.mesh().boundary_faces(tag).empty())
        throw InvalidArgument("Dirichlet tag '" + tag + "' matches no boundary face");
      for (int d : space.boundary_dofs(tag)) {
        for (int c = 0; c < space.components(); ++c) constrained.push_back(offset + space.dof(c, d));
      }
    }
  }
  constrained_ = std::move(constrained);
}

void MixedForm::finalize() {
  engine_->finalize_pattern();
  engine_->set_dirichlet(std::move(constrained_));
  set_steady(0.0);
}

MixedForm::~MixedForm() = default;

int MixedForm::size() const { return engine_->size(); }

StateLayout MixedForm::layout() const {
  return {engine_->scalar_dofs(), engine_->vector_dofs(), engine_->size() - engine_->offset_extra()};
}

const std::vector<int>& MixedForm::dirichlet_dofs() const { return engine_->dirichlet_dofs(); }

void MixedForm::set_step(const StepContext& ctx) {
  if (ctx.order() < 0 || static_cast<int>(ctx.history.size()) != ctx.order())
    throw InvalidArgument("step context history does not match its coefficients");
  if (ctx.order() > 0 && !(ctx.dt > 0.0)) throw InvalidArgument("time step must be positive");
  for (const auto* h : ctx.history)
    if (!h || h->size() != size()) throw InvalidArgument("history state has the wrong size");
  step_ = ctx;
  refresh_sources(ctx.time);
  bc_values_ = dirichlet_values(ctx.time);
}

void MixedForm::set_steady(double t) {
  StepContext ctx;
  ctx.time = t;
  ctx.dt = 1.0;
  set_step(ctx);
}

Eigen::VectorXd MixedForm::dirichlet_values(double t) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(engine_->size());
  // Later conditions win where tags overlap.
  for (const auto& bc : bcs_) {
    const FunctionSpace& space = bc.field == Field::Velocity      ? spaces_->velocity
                                 : bc.field == Field::Temperature ? spaces_->temperature
                                                                  : spaces_->density;
    const int offset = bc.field == Field::Velocity      ? engine_->offset_u()
                       : bc.field == Field::Temperature ? engine_->offset_T()
                                                        : 0;
    std::vector<std::string> tags = bc.tags;
    if (tags.empty()) tags.emplace_back();
    for (const auto& tag : tags)
      for (int d : space.boundary_dofs(tag)) {
        const Point& p = space.dof_point(d);
        if (bc.field == Field::Velocity) {
          const Eigen::Vector2d val = bc.vector(p, t);
          v(offset + space.dof(0, d)) = val.x();
          v(offset + space.dof(1, d)) = val.y();
        } else {
          v(offset + d) = bc.scalar(p, t);
        }
      }
  }
  return v;
}

void MixedForm::impose_dirichlet(Eigen::VectorXd& x, double t) const {
  const Eigen::VectorXd v = dirichlet_values(t);
  for (int g : engine_->dirichlet_dofs()) x(g) = v(g);
}

void MixedForm::refresh_sources(double t) {
  const auto& pts = engine_->volume_points();
  const std::size_t nq = engine_->volume_rule().size();
  const std::size_t total = pts.size() * nq;
  auto fill = [&](const SpaceTimeScalar& f, std::vector<double>& out) {
    out.assign(total, 0.0);
    if (!f) return;
    for (std::size_t e = 0; e < pts.size(); ++e)
      for (std::size_t q = 0; q < nq; ++q) out[e * nq + q] = f(pts[e][q], t);
  };
  fill(sources_.mass, src_mass_);
  fill(sources_.temperature, src_T_);
  src_ux_.assign(total, 0.0);
  src_uy_.assign(total, 0.0);
  if (sources_.momentum)
    for (std::size_t e = 0; e < pts.size(); ++e)
      for (std::size_t q = 0; q < nq; ++q) {
        const Eigen::Vector2d s = sources_.momentum(pts[e][q], t);
        src_ux_[e * nq + q] = s.x();
        src_uy_[e * nq + q] = s.y();
      }
}

void MixedForm::finish(const Eigen::VectorXd& x, Eigen::VectorXd& r, SparseMatrix* J) const {
  if (apply_dirichlet_) engine_->apply_dirichlet(x, bc_values_, r, J);
}

} // namespace vmfem
