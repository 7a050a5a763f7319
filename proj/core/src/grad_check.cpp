#include "pairlink/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pairlink/error.hpp"

namespace pairlink {
namespace {

double evaluate(const LossFunction& f) {
  Tape tape;
  return f(tape).item();
}

}  // namespace

GradCheckReport grad_check(const LossFunction& f, ParameterStore& store,
                           const GradCheckOptions& opts) {
  if (!(opts.eps > 0.0)) throw ValidationError("grad_check eps must be > 0");

  const double base = evaluate(f);
  if (evaluate(f) != base) {
    throw UsageError("grad_check target is not deterministic (disable dropout)");
  }

  store.zero_grad();
  {
    Tape tape;
    tape.backward(f(tape));
  }
  std::vector<std::pair<std::string, Matrix>> analytic;
  for (auto& [name, p] : store) analytic.emplace_back(name, p.grad);
  store.zero_grad();

  GradCheckReport report;
  std::size_t k = 0;
  for (auto& [name, p] : store) {
    const Matrix& a = analytic[k++].second;
    auto values = p.value.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + opts.eps;
      const double up = evaluate(f);
      values[i] = saved - opts.eps;
      const double down = evaluate(f);
      values[i] = saved;

      const double numeric = (up - down) / (2.0 * opts.eps);
      const double an = a.data()[i];
      const double denom = std::max({std::abs(an), std::abs(numeric), opts.floor});
      const double rel = std::abs(an - numeric) / denom;
      ++report.entries_checked;
      if (report.entries_checked == 1 || rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_parameter = name;
        report.worst_index = i;
        report.worst_analytic = an;
        report.worst_numeric = numeric;
      }
    }
  }
  report.passed = report.max_rel_error <= opts.tol;
  return report;
}

}  // namespace pairlink
