#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kinex {

/// Agent wealths plus the total recorded at construction. All exchange and
/// redistribution rules conserve that total.
class WealthState {
 public:
  /// N agents, each holding `initial_wealth`. Throws InvalidConfig for N < 2
  /// or a negative / non-finite initial wealth.
  WealthState(std::size_t n_agents, double initial_wealth);

  /// Adopts an explicit wealth vector. Throws InvalidConfig for N < 2 or any
  /// negative / non-finite entry.
  explicit WealthState(std::vector<double> wealth);

  std::size_t size() const noexcept { return wealth_.size(); }
  std::span<double> wealth() noexcept { return wealth_; }
  std::span<const double> wealth() const noexcept { return wealth_; }
  double operator[](std::size_t i) const noexcept { return wealth_[i]; }

  double initial_total() const noexcept { return initial_total_; }
  double total() const noexcept;

  /// |total − initial_total| ≤ rel_tol · initial_total, and no agent negative.
  bool conserved(double rel_tol) const noexcept;

 private:
  std::vector<double> wealth_;
  double initial_total_;
};

struct PairOutcome {
  double new_i;
  double new_j;
  /// Amount both agents put on the table this event, summed. The total
  /// exchange f is the mean of this over events, halved.
  double volume;
};

/// Both agents pool their unsaved wealth; agent i receives the share eps.
PairOutcome basic_step(double m_i, double m_j, double lambda, double eps) noexcept;

/// Both agents stake the unsaved part of the poorer agent's wealth.
PairOutcome ex_step(double m_i, double m_j, double lambda, double eps) noexcept;

/// The poorer agent stakes (1−λ)·min; the wealthier adds the fraction gamma of
/// the gap. Roles are fixed by the wealths on entry; ties take the branch in
/// which agent i plays the poorer side.
PairOutcome nx_step(double m_i, double m_j, double lambda, double gamma,
                    double eps) noexcept;

/// Every agent simultaneously keeps (1−ξ) of its wealth and hands ξ of it out
/// evenly to the other N−1 agents.
void redistribute(std::span<double> wealth, double xi) noexcept;
WealthState redistribute(const WealthState& state, double xi);

}  // namespace kinex
