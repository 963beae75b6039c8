#include "kinex/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kinex/error.hpp"

namespace kinex {

namespace {

void check_wealth(const std::vector<double>& wealth) {
  if (wealth.size() < 2) {
    throw Error(ErrorKind::InvalidConfig,
                "wealth state needs at least 2 agents, got " +
                    std::to_string(wealth.size()));
  }
  for (std::size_t i = 0; i < wealth.size(); ++i) {
    if (!std::isfinite(wealth[i]) || wealth[i] < 0.0) {
      throw Error(ErrorKind::InvalidConfig,
                  "wealth[" + std::to_string(i) + "] must be finite and >= 0");
    }
  }
}

}  // namespace

WealthState::WealthState(std::size_t n_agents, double initial_wealth)
    : WealthState(std::vector<double>(n_agents, initial_wealth)) {}

WealthState::WealthState(std::vector<double> wealth) : wealth_(std::move(wealth)) {
  check_wealth(wealth_);
  initial_total_ = total();
}

double WealthState::total() const noexcept {
  return std::accumulate(wealth_.begin(), wealth_.end(), 0.0);
}

bool WealthState::conserved(double rel_tol) const noexcept {
  if (std::any_of(wealth_.begin(), wealth_.end(), [](double w) { return w < 0.0; })) {
    return false;
  }
  return std::abs(total() - initial_total_) <= rel_tol * initial_total_;
}

PairOutcome basic_step(double m_i, double m_j, double lambda, double eps) noexcept {
  const double pool = (1.0 - lambda) * (m_i + m_j);
  const double new_i = lambda * m_i + eps * pool;
  // The complement keeps the pair total exact up to one rounding.
  const double new_j = (m_i + m_j) - new_i;
  return {new_i, std::max(new_j, 0.0), pool};
}

PairOutcome ex_step(double m_i, double m_j, double lambda, double eps) noexcept {
  const double stake = (1.0 - lambda) * std::min(m_i, m_j);
  const double new_i = m_i - stake + 2.0 * eps * stake;
  const double new_j = m_j - stake + 2.0 * (1.0 - eps) * stake;
  return {new_i, new_j, 2.0 * stake};
}

PairOutcome nx_step(double m_i, double m_j, double lambda, double gamma,
                    double eps) noexcept {
  const double lo = std::min(m_i, m_j);
  const double hi = std::max(m_i, m_j);
  const double poor_stake = (1.0 - lambda) * lo;
  const double rich_stake = (1.0 - lambda) * (lo + gamma * (hi - lo));
  const double pool = poor_stake + rich_stake;
  if (m_i <= m_j) {
    return {m_i - poor_stake + eps * pool, m_j - rich_stake + (1.0 - eps) * pool, pool};
  }
  return {m_i - rich_stake + eps * pool, m_j - poor_stake + (1.0 - eps) * pool, pool};
}

void redistribute(std::span<double> wealth, double xi) noexcept {
  const std::size_t n = wealth.size();
  if (n < 2 || xi == 0.0) return;
  const double total = std::accumulate(wealth.begin(), wealth.end(), 0.0);
  const double share = xi / static_cast<double>(n - 1);
  for (double& w : wealth) {
    w = (1.0 - xi) * w + share * (total - w);
    if (w < 0.0) w = 0.0;
  }
}

WealthState redistribute(const WealthState& state, double xi) {
  std::vector<double> next(state.wealth().begin(), state.wealth().end());
  redistribute(std::span<double>(next), xi);
  return WealthState(std::move(next));
}

}  // namespace kinex
