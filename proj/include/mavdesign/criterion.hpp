#ifndef MAVDESIGN_CRITERION_HPP
#define MAVDESIGN_CRITERION_HPP

#include <Eigen/Cholesky>
#include <optional>
#include <span>

#include "mavdesign/target.hpp"

namespace mavdesign {

/// Everything a criterion evaluation binds besides the design and the
/// parameter point: family, candidate set with averaging weights, target,
/// design space and the local deviation delta.
struct DesignProblem {
  ModelFamily family;
  AveragingScheme scheme;
  TargetFunctional target;
  DesignSpace space;
  Misspecification misspec;
};

void validate_problem(const DesignProblem& problem);

/// Finite prior on the nominal parameters: weighted atoms, each optionally
/// overriding the scenario-level delta.
struct PriorAtom {
  ParamVector params;
  double weight = 1.0;
  std::optional<Eigen::VectorXd> delta_override;
};

struct PriorSpec {
  std::vector<PriorAtom> atoms;

  static PriorSpec single(const ParamVector& params);
};

void validate_prior(const PriorSpec& prior, const ModelFamily& family);

/// Bayesian criterion value with its per-atom decomposition;
/// phi == sum of weight * (nu^2 + tau2) over atoms.
struct CriterionReport {
  double phi = 0.0;
  std::vector<double> nu_by_atom;
  std::vector<double> tau2_by_atom;
};

// ---------------------------------------------------------------------------
// Candidate-level building blocks.
// ---------------------------------------------------------------------------

/// Gaussian one-observation information at x for the candidate's parameters
/// (sigma2, vartheta, gamma_S): 1/(2 sigma^4) for sigma2, plus the rank-one
/// mean block grad grad^T / sigma2. Shape (p+|S|)^2.
Eigen::MatrixXd fisher_point(const ModelFamily& family, const Candidate& candidate, double x,
                             const DesignSpace& space, const ParamVector& params);

/// J_S(xi) = sum_i xi_i * fisher_point(x_i).
Eigen::MatrixXd info_matrix(const ModelFamily& family, const Candidate& candidate,
                            const Design& design, const DesignSpace& space,
                            const ParamVector& params);

/// h_S(xi) = P_S^T J_S^{-1}(xi) c_S, length p + q. Solved via an SPD
/// factorization; throws SingularInfoError past the condition guard 1e12.
Eigen::VectorXd h_vector(const ModelFamily& family, const Candidate& candidate,
                         const Design& design, const ParamVector& params,
                         const TargetFunctional& target, const DesignSpace& space);

/// L_S(xi) = (P_S^T J_S^{-1} P_S J - I) [0; I_q], shape (p+q) x q.
Eigen::MatrixXd L_matrix(const ModelFamily& family, const Candidate& candidate,
                         const Design& design, const DesignSpace& space,
                         const ParamVector& params);

// ---------------------------------------------------------------------------
// Criterion values. `params` plays the role of the nominal point: in the
// Bayesian criterion each prior atom is substituted for it wholesale.
// ---------------------------------------------------------------------------

double bias_nu(const DesignProblem& problem, const Design& design, const ParamVector& params);
double variance_tau2(const DesignProblem& problem, const Design& design,
                     const ParamVector& params);
double phi_local(const DesignProblem& problem, const Design& design, const ParamVector& params);
CriterionReport phi_bayes(const DesignProblem& problem, const Design& design,
                          const PriorSpec& prior);

// ---------------------------------------------------------------------------
// Batched evaluator. Caches the per-atom target gradients (which do not
// depend on the design) so that criterion and sensitivity evaluations inside
// optimization loops stay cheap. Immutable after construction; safe to share
// across threads.
// ---------------------------------------------------------------------------

class CriterionEvaluator {
 public:
  CriterionEvaluator(const DesignProblem& problem, const PriorSpec& prior);

  int n_atoms() const { return static_cast<int>(atoms_.size()); }
  const DesignProblem& problem() const { return problem_; }
  const std::vector<Candidate>& candidates() const { return candidates_; }

  /// Phi^pi for raw support points/weights (no Design invariants required
  /// beyond points inside the space and weights forming a subprobability).
  double phi(std::span<const double> points, std::span<const double> weights) const;
  double phi(const Design& design) const;

  CriterionReport report(const Design& design) const;

  /// Per-design precomputation shared by the sensitivity quantities.
  struct AtomContext {
    Eigen::MatrixXd info_wide;               // J(xi)
    Eigen::VectorXd zdelta;                  // (0_p; delta)
    Eigen::VectorXd u;                       // J * zdelta
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> factors;  // J_S factorizations
    std::vector<Eigen::VectorXd> a;          // J_S^{-1} c_S      (candidate space)
    std::vector<Eigen::VectorXd> w;          // J_S^{-1} (u)_S    (candidate space)
    std::vector<Eigen::VectorXd> t;          // J_S^{-1} (J H)_S  (candidate space)
    std::vector<Eigen::VectorXd> h;          // h_S               (full space)
    Eigen::VectorXd H;                       // sum g_S h_S
    Eigen::VectorXd JH;                      // J * H
    double nu = 0.0;
    double tau2 = 0.0;
  };

  struct Context {
    std::vector<AtomContext> atoms;
    double phi = 0.0;
  };

  Context prepare(const Design& design) const;

  /// Directional-derivative pieces of Theorem-style optimality checks.
  double d1_atom(const Context& ctx, int atom, double x) const;
  double d2_atom(const Context& ctx, int atom, double x) const;
  double d_pi(const Context& ctx, double x) const;
  Eigen::VectorXd h_tilde(const Context& ctx, int atom, int candidate_index, double x) const;

  double atom_weight(int atom) const { return atoms_[atom].weight; }
  const ParamVector& atom_params(int atom) const { return atoms_[atom].params; }
  const Eigen::VectorXd& atom_target_grad(int atom) const { return atoms_[atom].c; }

 private:
  struct Atom {
    ParamVector params;
    double weight;
    Eigen::VectorXd c;      // target gradient at the atom, length p + q
    Eigen::VectorXd delta;  // raw delta in effect for this atom
  };

  struct AtomEval {
    double nu;
    double tau2;
  };

  AtomEval eval_atom(const Atom& atom, std::span<const double> points,
                     std::span<const double> weights, AtomContext* ctx) const;

  DesignProblem problem_;
  std::vector<Candidate> candidates_;
  std::vector<Atom> atoms_;
};

}  // namespace mavdesign

#endif  // MAVDESIGN_CRITERION_HPP
