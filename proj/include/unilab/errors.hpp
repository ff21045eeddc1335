#pragma once

#include <stdexcept>
#include <string>

namespace unilab {

// Base of all domain failures. kind() is a stable machine-readable tag used
// by the CLI to emit structured error reports.
class error : public std::runtime_error {
public:
  error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

struct precondition_error : error {
  explicit precondition_error(const std::string& what)
      : error("precondition_violation", what) {}
};

struct unsupported_representation : error {
  explicit unsupported_representation(const std::string& what)
      : error("unsupported_representation", what) {}
};

struct pole_hit : error {
  explicit pole_hit(int step_)
      : error("pole_hit", "orbit hit a pole at step " + std::to_string(step_)),
        step(step_) {}
  int step;
};

struct orbit_escaped : error {
  explicit orbit_escaped(int step_)
      : error("orbit_escaped",
              "orbit exceeded the overflow guard at step " + std::to_string(step_)),
        step(step_) {}
  int step;
};

struct non_convergence : error {
  explicit non_convergence(const std::string& what) : error("non_convergence", what) {}
};

struct not_a_fixed_point : error {
  explicit not_a_fixed_point(const std::string& what)
      : error("not_a_fixed_point", what) {}
};

struct not_in_basin : error {
  explicit not_in_basin(const std::string& what) : error("not_in_basin", what) {}
};

struct not_in_chart : error {
  explicit not_in_chart(const std::string& what) : error("not_in_chart", what) {}
};

struct not_in_petal : error {
  explicit not_in_petal(const std::string& what) : error("not_in_petal", what) {}
};

struct out_of_range_error : error {
  explicit out_of_range_error(const std::string& what) : error("out_of_range", what) {}
};

struct branch_ambiguity : error {
  explicit branch_ambiguity(const std::string& what)
      : error("branch_ambiguity", what) {}
};

struct ill_conditioned : error {
  explicit ill_conditioned(double estimate)
      : error("ill_conditioned",
              "least-squares system condition estimate " + std::to_string(estimate) +
                  " exceeds 1e14; raise ridge or lower degree"),
        condition_estimate(estimate) {}
  double condition_estimate;
};

struct no_disjoint_n : error {
  explicit no_disjoint_n(const std::string& what) : error("no_disjoint_n", what) {}
};

struct approximation_failed : error {
  explicit approximation_failed(double best)
      : error("approximation_failed",
              "degree escalation exhausted; best error " + std::to_string(best)),
        best_error(best) {}
  double best_error;
};

struct injectivity_violated : error {
  injectivity_violated(int n_, int i_, int j_)
      : error("injectivity_violated",
              "iterate " + std::to_string(n_) + " collapses points " +
                  std::to_string(i_) + " and " + std::to_string(j_)),
        n(n_), i(i_), j(j_) {}
  int n, i, j;
};

struct degree_cap_exceeded : error {
  explicit degree_cap_exceeded(const std::string& what)
      : error("degree_cap_exceeded", what) {}
};

struct petal_count_too_small : error {
  explicit petal_count_too_small(const std::string& what)
      : error("petal_count_too_small", what) {}
};

struct degenerate_fit : error {
  explicit degenerate_fit(const std::string& what) : error("degenerate_fit", what) {}
};

struct io_error : error {
  explicit io_error(const std::string& what) : error("io_error", what) {}
};

} // namespace unilab
