#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "focustime/core.hpp"
#include "focustime/metric.hpp"
#include "focustime/timeutil.hpp"

namespace ft {

struct QuarterAggregate {
  std::string actor;
  Quarter quarter;
  double hours_in_focus = 0.0;
  double pct_time_in_focus = 0.0;   // 0..1, total session time as denominator
  std::uint64_t focus_session_count = 0;
  double pct_days_with_focus = 0.0; // 0..1, active work days as denominator
  double total_session_hours = 0.0;
  std::uint64_t total_event_count = 0;
  std::uint64_t total_session_count = 0;
  bool zero_active_time = false;    // percentages forced to 0
};

// Per (actor, quarter of start timestamp, UTC) rollup. An active work day is
// a UTC calendar day with at least one session start. Output ordered by
// (actor, quarter).
std::vector<QuarterAggregate> quarter_metrics(const std::vector<FocusSession>& focus,
                                              const std::vector<Session>& sessions);

// CSV, one row per aggregate:
// actor,quarter,hours_in_focus,pct_time_in_focus,focus_session_count,
// pct_days_with_focus,total_session_hours,total_event_count,total_session_count
void write_quarter_csv(std::ostream& out, const std::vector<QuarterAggregate>& aggregates);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided, slope != 0, n-2 dof
  std::size_t n = 0;
};

// Ordinary least squares for y ~ a + b*x. Requires n >= 3 and nonzero
// variance in x.
FitResult linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace ft
