#include "collatz/feasibility.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>

#include "collatz/errors.hpp"

namespace collatz {

LinearConstraint make_ge(std::vector<Rat> coeffs, Rat rhs) {
  return LinearConstraint{std::move(coeffs), std::move(rhs), LinearConstraint::Rel::ge};
}

LinearConstraint make_eq(std::vector<Rat> coeffs, Rat rhs) {
  return LinearConstraint{std::move(coeffs), std::move(rhs), LinearConstraint::Rel::eq};
}

namespace {

bool all_zero(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& c) { return c.is_zero(); });
}

struct EqStep {
  std::size_t var = 0;
  LinearConstraint c;
};

struct FmStep {
  std::size_t var = 0;
  std::vector<LinearConstraint> lowers;  // coeff(var) > 0
  std::vector<LinearConstraint> uppers;  // coeff(var) < 0
};

struct Step {
  bool is_eq = false;
  EqStep eq;
  FmStep fm;
};

// Bound on var induced by c at the partial point x:
// (rhs - sum_{i != var} c_i x_i) / c_var.
Rat solve_for(const LinearConstraint& c, std::size_t var, const std::vector<Rat>& x) {
  Rat acc = c.rhs;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (i == var || c.coeffs[i].is_zero()) continue;
    acc -= c.coeffs[i] * x[i];
  }
  return acc / c.coeffs[var];
}

bool trivially_consistent(const LinearConstraint& c) {
  if (c.rel == LinearConstraint::Rel::eq) return c.rhs.is_zero();
  return c.rhs.sign() <= 0;  // 0 >= rhs
}

}  // namespace

FeasibilityResult solve_feasibility(std::size_t num_vars, std::vector<LinearConstraint> constraints) {
  for (const auto& c : constraints) {
    if (c.coeffs.size() != num_vars)
      fail(Errc::parse, "constraint arity does not match variable count");
  }

  std::vector<Step> steps;
  std::vector<bool> eliminated(num_vars, false);

  auto sweep = [&](std::vector<LinearConstraint>& cs) -> bool {
    std::vector<LinearConstraint> kept;
    kept.reserve(cs.size());
    for (auto& c : cs) {
      if (all_zero(c.coeffs)) {
        if (!trivially_consistent(c)) return false;
      } else {
        kept.push_back(std::move(c));
      }
    }
    cs = std::move(kept);
    return true;
  };

  while (true) {
    if (!sweep(constraints)) return {};
    if (constraints.empty()) break;

    std::optional<std::size_t> eq_idx;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (constraints[i].rel == LinearConstraint::Rel::eq) {
        eq_idx = i;
        break;
      }
    }

    if (eq_idx) {
      LinearConstraint eq = std::move(constraints[*eq_idx]);
      constraints.erase(constraints.begin() + static_cast<std::ptrdiff_t>(*eq_idx));
      std::size_t var = 0;
      while (eq.coeffs[var].is_zero()) ++var;
      for (auto& c : constraints) {
        if (c.coeffs[var].is_zero()) continue;
        Rat factor = c.coeffs[var] / eq.coeffs[var];
        for (std::size_t i = 0; i < num_vars; ++i) {
          if (!eq.coeffs[i].is_zero()) c.coeffs[i] -= factor * eq.coeffs[i];
        }
        c.rhs -= factor * eq.rhs;
      }
      eliminated[var] = true;
      steps.push_back(Step{true, EqStep{var, std::move(eq)}, {}});
      continue;
    }

    // Pure inequalities: eliminate the variable with the smallest
    // lower*upper fan-out.
    std::size_t best_var = num_vars;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < num_vars; ++v) {
      if (eliminated[v]) continue;
      std::size_t lo = 0;
      std::size_t up = 0;
      for (const auto& c : constraints) {
        int s = c.coeffs[v].sign();
        if (s > 0) ++lo;
        else if (s < 0) ++up;
      }
      if (lo + up == 0) continue;
      std::size_t cost = lo * up;
      if (cost < best_cost) {
        best_cost = cost;
        best_var = v;
      }
    }
    if (best_var == num_vars) break;

    std::vector<LinearConstraint> lowers;
    std::vector<LinearConstraint> uppers;
    std::vector<LinearConstraint> rest;
    for (auto& c : constraints) {
      int s = c.coeffs[best_var].sign();
      if (s > 0) lowers.push_back(std::move(c));
      else if (s < 0) uppers.push_back(std::move(c));
      else rest.push_back(std::move(c));
    }
    for (const auto& lo : lowers) {
      for (const auto& up : uppers) {
        // lo: a·x >= r with a_v > 0,  up: b·x >= s with b_v < 0.
        // (-b_v)·lo + a_v·up cancels x_v with positive multipliers.
        LinearConstraint comb;
        comb.rel = LinearConstraint::Rel::ge;
        comb.coeffs.assign(num_vars, Rat(0));
        const Rat mlo = -up.coeffs[best_var];
        const Rat mup = lo.coeffs[best_var];
        for (std::size_t i = 0; i < num_vars; ++i) {
          if (i == best_var) continue;
          comb.coeffs[i] = mlo * lo.coeffs[i] + mup * up.coeffs[i];
        }
        comb.rhs = mlo * lo.rhs + mup * up.rhs;
        rest.push_back(std::move(comb));
        if (rest.size() > kMaxWorkingConstraints)
          fail(Errc::feasibility_blowup, "Fourier-Motzkin working set exceeded cap");
      }
    }
    eliminated[best_var] = true;
    steps.push_back(Step{false, {}, FmStep{best_var, std::move(lowers), std::move(uppers)}});
    constraints = std::move(rest);
  }

  std::vector<Rat> x(num_vars, Rat(0));
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->is_eq) {
      x[it->eq.var] = solve_for(it->eq.c, it->eq.var, x);
      continue;
    }
    const auto& fm = it->fm;
    std::optional<Rat> lo;
    std::optional<Rat> up;
    for (const auto& c : fm.lowers) {
      Rat v = solve_for(c, fm.var, x);
      if (!lo || v > *lo) lo = v;
    }
    for (const auto& c : fm.uppers) {
      Rat v = solve_for(c, fm.var, x);
      if (!up || v < *up) up = v;
    }
    if (lo && up) x[fm.var] = (*lo + *up) / 2;
    else if (lo) x[fm.var] = *lo;
    else if (up) x[fm.var] = *up;
  }
  return {true, std::move(x)};
}

}  // namespace collatz
