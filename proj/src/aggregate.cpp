#include "focustime/aggregate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "focustime/csv.hpp"
#include "focustime/errors.hpp"

namespace ft {

namespace {

constexpr double kMsPerHour = 3600.0 * 1000.0;

struct Accumulator {
  double focus_ms = 0.0;
  double session_ms = 0.0;
  std::uint64_t focus_count = 0;
  std::uint64_t session_count = 0;
  std::uint64_t event_count = 0;
  std::set<std::int64_t> active_days;
  std::set<std::int64_t> focus_days;
};

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::vector<QuarterAggregate> quarter_metrics(const std::vector<FocusSession>& focus,
                                              const std::vector<Session>& sessions) {
  std::map<std::pair<std::string, Quarter>, Accumulator> acc;

  for (const Session& s : sessions) {
    Accumulator& a = acc[{s.actor, quarter_of(s.start_ms)}];
    a.session_ms += static_cast<double>(s.length_ms());
    a.session_count += 1;
    a.event_count += s.events.size();
    a.active_days.insert(utc_day_index(s.start_ms));
  }
  for (const FocusSession& fs : focus) {
    Accumulator& a = acc[{fs.actor, quarter_of(fs.start_ms)}];
    a.focus_ms += static_cast<double>(fs.end_ms - fs.start_ms);
    a.focus_count += 1;
    a.focus_days.insert(utc_day_index(fs.start_ms));
  }

  std::vector<QuarterAggregate> out;
  out.reserve(acc.size());
  for (const auto& [key, a] : acc) {
    QuarterAggregate q;
    q.actor = key.first;
    q.quarter = key.second;
    q.hours_in_focus = a.focus_ms / kMsPerHour;
    q.focus_session_count = a.focus_count;
    q.total_session_hours = a.session_ms / kMsPerHour;
    q.total_event_count = a.event_count;
    q.total_session_count = a.session_count;
    q.zero_active_time = a.session_ms <= 0.0;
    q.pct_time_in_focus = q.zero_active_time ? 0.0 : a.focus_ms / a.session_ms;
    // only count focus days that are also active days, so the ratio stays <= 1
    std::uint64_t focus_days = 0;
    for (std::int64_t day : a.focus_days) focus_days += a.active_days.count(day);
    q.pct_days_with_focus =
        a.active_days.empty()
            ? 0.0
            : static_cast<double>(focus_days) / static_cast<double>(a.active_days.size());
    out.push_back(std::move(q));
  }
  return out;
}

void write_quarter_csv(std::ostream& out, const std::vector<QuarterAggregate>& aggregates) {
  out << "actor,quarter,hours_in_focus,pct_time_in_focus,focus_session_count,"
         "pct_days_with_focus,total_session_hours,total_event_count,total_session_count\n";
  for (const QuarterAggregate& q : aggregates) {
    write_csv_row(out, {q.actor, to_string(q.quarter), fmt_double(q.hours_in_focus),
                        fmt_double(q.pct_time_in_focus), std::to_string(q.focus_session_count),
                        fmt_double(q.pct_days_with_focus), fmt_double(q.total_session_hours),
                        std::to_string(q.total_event_count),
                        std::to_string(q.total_session_count)});
  }
}

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("linear_fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("linear_fit needs n >= 3");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[i] - mean_y);
  }
  if (sxx == 0.0) throw ValidationError("linear_fit: x has zero variance");

  FitResult fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  const double se = std::sqrt((ssr / dof) / sxx);
  if (se == 0.0) {
    // exact fit: the slope is either exactly zero (flat data) or certain
    fit.t_stat = fit.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
    return fit;
  }
  fit.t_stat = fit.slope / se;
  const boost::math::students_t dist(dof);
  fit.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(fit.t_stat)));
  return fit;
}

}  // namespace ft
