#include "mavdesign/criterion.hpp"

#include <cmath>
#include <sstream>

namespace mavdesign {

namespace {

constexpr double kRcondGuard = 1e-12;  // condition number guard 1e12

std::string design_label(std::span<const double> points) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i) os << ", ";
    os << points[i];
  }
  os << "]";
  return os.str();
}

Eigen::LDLT<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& info,
                                            const CandidateSubset& subset,
                                            std::span<const double> points,
                                            int atom_index) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  bool ok = ldlt.info() == Eigen::Success && ldlt.isPositive();
  if (ok) {
    const double rc = ldlt.rcond();
    ok = std::isfinite(rc) && rc > kRcondGuard;
  }
  if (!ok) {
    std::ostringstream os;
    os << "singular information matrix for candidate S=" << subset.label();
    if (atom_index >= 0) os << " at prior atom " << atom_index;
    os << ", design points " << design_label(points);
    throw SingularInfoError(os.str());
  }
  return ldlt;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& full, const std::vector<int>& sel) {
  const int d = static_cast<int>(sel.size());
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = full(sel[i], sel[j]);
  return out;
}

}  // namespace

void validate_problem(const DesignProblem& problem) {
  validate_space(problem.space);
  validate_scheme(problem.scheme, problem.family.q);
  validate_target(problem.target, problem.space);
  if (problem.misspec.delta.size() != problem.family.q) {
    throw ValidationError("misspecification: delta must have length q = " +
                          std::to_string(problem.family.q));
  }
}

PriorSpec PriorSpec::single(const ParamVector& params) {
  PriorSpec prior;
  prior.atoms.push_back({params, 1.0, std::nullopt});
  return prior;
}

void validate_prior(const PriorSpec& prior, const ModelFamily& family) {
  if (prior.atoms.empty()) throw ValidationError("prior: needs at least one atom");
  double sum = 0.0;
  for (const auto& atom : prior.atoms) {
    validate_params(family, atom.params);
    if (!(atom.weight > 0.0)) throw ValidationError("prior: atom weights must be positive");
    if (atom.delta_override && atom.delta_override->size() != family.q) {
      throw ValidationError("prior: per-atom delta must have length q");
    }
    sum += atom.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("prior: atom weights must sum to 1 within 1e-12");
  }
}

Eigen::MatrixXd fisher_point(const ModelFamily& family, const Candidate& candidate, double x,
                             const DesignSpace& space, const ParamVector& params) {
  const int d = candidate.dim();
  const double s2 = params.sigma2;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d, d);
  info(0, 0) = 1.0 / (2.0 * s2 * s2);
  const Eigen::VectorXd g = candidate.select_mean(grad_eta(family, x, space, params));
  info.block(1, 1, d - 1, d - 1) = (1.0 / s2) * g * g.transpose();
  return info;
}

Eigen::MatrixXd info_matrix(const ModelFamily& family, const Candidate& candidate,
                            const Design& design, const DesignSpace& space,
                            const ParamVector& params) {
  const int d = candidate.dim();
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < design.k(); ++i) {
    info += design.weights[i] * fisher_point(family, candidate, design.points[i], space, params);
  }
  return info;
}

Eigen::VectorXd h_vector(const ModelFamily& family, const Candidate& candidate,
                         const Design& design, const ParamVector& params,
                         const TargetFunctional& target, const DesignSpace& space) {
  const Eigen::MatrixXd info = info_matrix(family, candidate, design, space, params);
  const auto ldlt = factor_checked(info, candidate.subset, design.points, -1);
  const Eigen::VectorXd c_sub = target_grad_sub(target, family, space, candidate, params);
  return candidate.scatter(ldlt.solve(c_sub));
}

Eigen::MatrixXd L_matrix(const ModelFamily& family, const Candidate& candidate,
                         const Design& design, const DesignSpace& space,
                         const ParamVector& params) {
  const int p = family.p, q = family.q;
  CandidateSubset wide_subset;
  for (int j = 1; j <= q; ++j) wide_subset.indices.push_back(j);
  const Candidate wide = build_candidate(family, wide_subset);

  const Eigen::MatrixXd J = info_matrix(family, wide, design, space, params);
  const Eigen::MatrixXd J_sub = gather(J, candidate.selection);
  const auto ldlt = factor_checked(J_sub, candidate.subset, design.points, -1);

  Eigen::MatrixXd rows(candidate.dim(), p + q);
  for (int i = 0; i < candidate.dim(); ++i) rows.row(i) = J.row(candidate.selection[i]);
  const Eigen::MatrixXd solved = ldlt.solve(rows);

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(p + q, p + q);
  for (int i = 0; i < candidate.dim(); ++i) Z.row(candidate.selection[i]) = solved.row(i);
  Z -= Eigen::MatrixXd::Identity(p + q, p + q);
  return Z.rightCols(q);
}

CriterionEvaluator::CriterionEvaluator(const DesignProblem& problem, const PriorSpec& prior)
    : problem_(problem) {
  validate_problem(problem_);
  validate_prior(prior, problem_.family);
  candidates_ = build_candidates(problem_.family, problem_.scheme);
  atoms_.reserve(prior.atoms.size());
  for (const auto& atom : prior.atoms) {
    Atom a;
    a.params = atom.params;
    a.weight = atom.weight;
    a.c = target_grad_full(problem_.target, problem_.family, problem_.space, atom.params);
    a.delta = atom.delta_override ? *atom.delta_override : problem_.misspec.delta;
    atoms_.push_back(std::move(a));
  }
}

CriterionEvaluator::AtomEval CriterionEvaluator::eval_atom(const Atom& atom,
                                                           std::span<const double> points,
                                                           std::span<const double> weights,
                                                           AtomContext* ctx) const {
  const ModelFamily& family = problem_.family;
  const int dim = family.p + family.q;
  const int nm = family.n_mean_params();
  const double s2 = atom.params.sigma2;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
  double total_weight = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    total_weight += w;
    const Eigen::VectorXd g = grad_eta(family, points[i], problem_.space, atom.params);
    J(0, 0) += w / (2.0 * s2 * s2);
    J.block(1, 1, nm, nm).noalias() += (w / s2) * g * g.transpose();
  }
  if (!(total_weight > 0.0)) {
    throw SingularInfoError("criterion: design carries no weight");
  }

  Eigen::VectorXd zdelta = Eigen::VectorXd::Zero(dim);
  zdelta.tail(family.q) = atom.delta;
  const Eigen::VectorXd u = J * zdelta;
  const double c_dot_z = atom.c.dot(zdelta);

  const int atom_index = static_cast<int>(&atom - atoms_.data());
  double nu = 0.0;
  Eigen::VectorXd H = Eigen::VectorXd::Zero(dim);
  if (ctx) {
    ctx->info_wide = J;
    ctx->zdelta = zdelta;
    ctx->u = u;
    ctx->factors.clear();
    ctx->a.clear();
    ctx->w.clear();
    ctx->t.clear();
    ctx->h.clear();
  }
  for (size_t j = 0; j < candidates_.size(); ++j) {
    const Candidate& cand = candidates_[j];
    const double g_j = problem_.scheme.g_weights[j];
    const Eigen::MatrixXd J_sub = gather(J, cand.selection);
    auto ldlt = factor_checked(J_sub, cand.subset, points, atom_index);
    const Eigen::VectorXd c_sub = cand.select(atom.c);
    const Eigen::VectorXd a = ldlt.solve(c_sub);
    const Eigen::VectorXd u_sub = cand.select(u);
    const Eigen::VectorXd h = cand.scatter(a);
    nu += g_j * (a.dot(u_sub) - c_dot_z);
    H += g_j * h;
    if (ctx) {
      ctx->w.push_back(ldlt.solve(u_sub));
      ctx->factors.push_back(std::move(ldlt));
      ctx->a.push_back(a);
      ctx->h.push_back(h);
    }
  }
  const Eigen::VectorXd JH = J * H;
  const double tau2 = H.dot(JH);
  if (ctx) {
    ctx->H = H;
    ctx->JH = JH;
    ctx->nu = nu;
    ctx->tau2 = tau2;
    for (size_t j = 0; j < candidates_.size(); ++j) {
      ctx->t.push_back(ctx->factors[j].solve(candidates_[j].select(JH)));
    }
  }
  return {nu, tau2};
}

double CriterionEvaluator::phi(std::span<const double> points,
                               std::span<const double> weights) const {
  double value = 0.0;
  for (const Atom& atom : atoms_) {
    const AtomEval e = eval_atom(atom, points, weights, nullptr);
    value += atom.weight * (e.nu * e.nu + e.tau2);
  }
  return value;
}

double CriterionEvaluator::phi(const Design& design) const {
  return phi(std::span<const double>(design.points), std::span<const double>(design.weights));
}

CriterionReport CriterionEvaluator::report(const Design& design) const {
  CriterionReport rep;
  for (const Atom& atom : atoms_) {
    const AtomEval e = eval_atom(atom, design.points, design.weights, nullptr);
    rep.nu_by_atom.push_back(e.nu);
    rep.tau2_by_atom.push_back(e.tau2);
    rep.phi += atom.weight * (e.nu * e.nu + e.tau2);
  }
  return rep;
}

CriterionEvaluator::Context CriterionEvaluator::prepare(const Design& design) const {
  Context ctx;
  ctx.atoms.resize(atoms_.size());
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const AtomEval e =
        eval_atom(atoms_[i], design.points, design.weights, &ctx.atoms[i]);
    ctx.phi += atoms_[i].weight * (e.nu * e.nu + e.tau2);
  }
  return ctx;
}

// One-point wide information at x acts as the rank-two map
// M_x y = s0 y(0) e0 + v (v . y) with v = (0, grad/sigma) and s0 = 1/(2 sigma^4);
// candidate restrictions reuse the same structure because sel[0] == 0.
double CriterionEvaluator::d1_atom(const Context& ctx, int atom, double x) const {
  const Atom& at = atoms_[atom];
  const AtomContext& ac = ctx.atoms[atom];
  const int dim = problem_.family.p + problem_.family.q;
  const double s2 = at.params.sigma2;
  const double s0 = 1.0 / (2.0 * s2 * s2);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v.tail(problem_.family.n_mean_params()) =
      grad_eta(problem_.family, x, problem_.space, at.params) / std::sqrt(s2);

  const double v_dot_z = v.dot(ac.zdelta);
  double d1 = 0.0;
  for (size_t j = 0; j < candidates_.size(); ++j) {
    const double g_j = problem_.scheme.g_weights[j];
    const Eigen::VectorXd v_sub = candidates_[j].select(v);
    const double term1 = ac.h[j].dot(v) * v_dot_z;  // zdelta(0) == 0
    const double term2 = s0 * ac.a[j](0) * ac.w[j](0) + ac.a[j].dot(v_sub) * v_sub.dot(ac.w[j]);
    d1 += g_j * (term1 - term2);
  }
  return d1;
}

double CriterionEvaluator::d2_atom(const Context& ctx, int atom, double x) const {
  const Atom& at = atoms_[atom];
  const AtomContext& ac = ctx.atoms[atom];
  const int dim = problem_.family.p + problem_.family.q;
  const double s2 = at.params.sigma2;
  const double s0 = 1.0 / (2.0 * s2 * s2);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v.tail(problem_.family.n_mean_params()) =
      grad_eta(problem_.family, x, problem_.space, at.params) / std::sqrt(s2);

  const double Hv = ac.H.dot(v);
  double d2 = ac.tau2 + s0 * ac.H(0) * ac.H(0) + Hv * Hv;
  for (size_t j = 0; j < candidates_.size(); ++j) {
    const double g_j = problem_.scheme.g_weights[j];
    const Eigen::VectorXd v_sub = candidates_[j].select(v);
    const double htilde_JH =
        s0 * ac.a[j](0) * ac.t[j](0) + ac.a[j].dot(v_sub) * v_sub.dot(ac.t[j]);
    d2 -= 2.0 * g_j * htilde_JH;
  }
  return d2;
}

double CriterionEvaluator::d_pi(const Context& ctx, double x) const {
  double sum = 0.0;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const int idx = static_cast<int>(i);
    const double d1 = d1_atom(ctx, idx, x);
    const double d2 = d2_atom(ctx, idx, x);
    sum += atoms_[i].weight * (-2.0 * ctx.atoms[i].nu * d1 - d2);
  }
  return sum;
}

Eigen::VectorXd CriterionEvaluator::h_tilde(const Context& ctx, int atom, int candidate_index,
                                            double x) const {
  const Atom& at = atoms_[atom];
  const AtomContext& ac = ctx.atoms[atom];
  const Candidate& cand = candidates_[candidate_index];
  const int dim = problem_.family.p + problem_.family.q;
  const double s2 = at.params.sigma2;
  const double s0 = 1.0 / (2.0 * s2 * s2);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v.tail(problem_.family.n_mean_params()) =
      grad_eta(problem_.family, x, problem_.space, at.params) / std::sqrt(s2);
  const Eigen::VectorXd v_sub = cand.select(v);

  Eigen::VectorXd rhs = v_sub * v_sub.dot(ac.a[candidate_index]);
  rhs(0) += s0 * ac.a[candidate_index](0);
  return cand.scatter(ac.factors[candidate_index].solve(rhs));
}

double bias_nu(const DesignProblem& problem, const Design& design, const ParamVector& params) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  return eval.report(design).nu_by_atom[0];
}

double variance_tau2(const DesignProblem& problem, const Design& design,
                     const ParamVector& params) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  return eval.report(design).tau2_by_atom[0];
}

double phi_local(const DesignProblem& problem, const Design& design, const ParamVector& params) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, PriorSpec::single(params));
  return eval.report(design).phi;
}

CriterionReport phi_bayes(const DesignProblem& problem, const Design& design,
                          const PriorSpec& prior) {
  validate_design(design, problem.space);
  const CriterionEvaluator eval(problem, prior);
  return eval.report(design);
}

}  // namespace mavdesign
