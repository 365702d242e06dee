#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wvc/engine.hpp"
#include "wvc/rational.hpp"
#include "wvc/trace.hpp"

namespace wvc {

// Unique x > 1 with sum x^(-d_i) = 1, by bisection. A single-branch vector
// has root 1 (no growth).
inline double branching_number(const std::vector<Rational>& decreases, double tol = 1e-9) {
  require(!decreases.empty(), errc::parse_error, "empty branching vector");
  for (const auto& d : decreases)
    require(d.sign() > 0, errc::parse_error, "branching vector entries must be positive");
  if (decreases.size() == 1) return 1.0;
  auto eval = [&](double x) {
    double s = 0;
    for (const auto& d : decreases) s += std::pow(x, -d.to_double());
    return s;
  };
  double lo = 1.0, hi = 2.0;
  while (eval(hi) > 1.0) hi *= 2;
  while (hi - lo > tol) {
    double mid = (lo + hi) / 2;
    (eval(mid) > 1.0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

struct AuditViolation {
  long seq = 0;
  int rule = 0;
  int branch = -1;
  std::string kind;
  std::string detail;
  bool derived = false;  // rules 5/6 floors rest on our own case analysis
};

struct AuditStepInput {
  int rule = 0;
  int q = 0;
  bool u2_defined = false;
  int cycle_len = 0;
  bool reduction = false;
  int pairs_touched = 0;
  Measures before;
  std::vector<Measures> after;  // one entry per branch; one entry for reductions
  long seq = 0;
};

namespace detail {

inline void check_m1_floors(const AuditStepInput& in, std::vector<Rational> floors,
                            bool derived, std::vector<AuditViolation>& out) {
  std::vector<Rational> observed;
  for (const auto& a : in.after) observed.push_back(in.before.m1 - a.m1);
  if (observed.size() != floors.size()) {
    out.push_back({in.seq, in.rule, -1, "branch_count",
                   "expected " + std::to_string(floors.size()) + " branches, saw " +
                       std::to_string(observed.size()),
                   derived});
    return;
  }
  std::sort(observed.begin(), observed.end());
  std::sort(floors.begin(), floors.end());
  for (size_t i = 0; i < floors.size(); ++i)
    if (observed[i] < floors[i])
      out.push_back({in.seq, in.rule, static_cast<int>(i), "m1_floor",
                     "observed decrease " + observed[i].to_decimal() + " below floor " +
                         floors[i].to_decimal(),
                     derived});
}

inline void check_pair_rows(const AuditStepInput& in, const std::vector<long>& dm_rows,
                            const std::vector<long>& dM_caps, bool last_is_tail,
                            std::vector<AuditViolation>& out) {
  if (in.after.size() != dm_rows.size()) {
    out.push_back({in.seq, in.rule, -1, "branch_count", "unexpected branch count", false});
    return;
  }
  double sum = 0;
  for (size_t i = 0; i < dm_rows.size(); ++i) {
    long dm = in.before.m - in.after[i].m;
    Rational dM = in.before.M - in.after[i].M;
    bool tail = last_is_tail && i + 1 == dm_rows.size();
    if (tail ? dm < dm_rows[i] : dm != dm_rows[i])
      out.push_back({in.seq, in.rule, static_cast<int>(i), "dm_row",
                     "observed dm " + std::to_string(dm) + " vs row " +
                         std::to_string(dm_rows[i]),
                     false});
    Rational cap = Rational(dM_caps[i]) +
                   (tail ? Rational(2) * Rational(dm - dm_rows[i]) : Rational(0));
    if (dM > cap)
      out.push_back({in.seq, in.rule, static_cast<int>(i), "dM_cap",
                     "observed dM " + dM.to_decimal() + " above cap " + cap.to_decimal(),
                     false});
    sum += std::pow(2.0, -static_cast<double>(dm) / 2.0) *
           std::pow(0.9808, -dM.to_double());
  }
  if (sum > 1.0 + 1e-9)
    out.push_back({in.seq, in.rule, -1, "branch_sum",
                   "induction step sum " + std::to_string(sum) + " exceeds 1", false});
}

}  // namespace detail

// Checks one rule application against the measure-decrease table.
inline std::vector<AuditViolation> audit_step(const AuditStepInput& in,
                                              const Rational& alpha = kDefaultAlpha,
                                              const Rational& beta = kDefaultBeta) {
  std::vector<AuditViolation> out;
  const Rational one(1);
  switch (in.rule) {
    case 4:
      detail::check_m1_floors(
          in,
          {Rational(5) - Rational(2) * alpha, Rational(5) - Rational(2) * alpha,
           Rational(5) - Rational(2) * alpha, Rational(3) - alpha},
          false, out);
      break;
    case 5: {
      std::vector<Rational> floors(9, Rational(8) - Rational(3) * alpha);
      floors.push_back(Rational(4));
      detail::check_m1_floors(in, floors, true, out);
      break;
    }
    case 6:
      detail::check_m1_floors(in, {Rational(2) - alpha, Rational(3)}, true, out);
      break;
    case 7: {
      std::vector<Rational> floors;
      if (in.cycle_len == 4)
        floors = {Rational(4) - Rational(2) * alpha, Rational(4) - alpha,
                  Rational(4) - Rational(2) * alpha};
      else if (in.cycle_len == 5)
        floors = {Rational(3) - alpha, Rational(5) - Rational(2) * alpha,
                  Rational(3) - alpha};
      else
        floors = {Rational(5) - Rational(2) * alpha, Rational(6) - Rational(2) * alpha,
                  Rational(4) - alpha, Rational(5) - Rational(2) * alpha,
                  Rational(6) - Rational(2) * alpha};
      detail::check_m1_floors(in, floors, false, out);
      break;
    }
    case 11:
    case 12:
      check(in.q == 2, "pair branching outside q=2");
      if (in.u2_defined)
        detail::check_pair_rows(in, {4, 4, 4, 6}, {8, 6, 6, 8}, true, out);
      else
        detail::check_pair_rows(in, {2, 4}, {4, 6}, true, out);
      break;
    case 13: {
      if (in.after.size() != 2) {
        out.push_back({in.seq, 13, -1, "branch_count", "rule 13 must have 2 branches", false});
        break;
      }
      Rational dm2_row = Rational(2) * (one + alpha * beta);
      for (size_t i = 0; i < in.after.size(); ++i) {
        long dm = in.before.m - in.after[i].m;
        if (dm != 2)
          out.push_back({in.seq, 13, static_cast<int>(i), "dm_row",
                         "observed dm " + std::to_string(dm) + " vs row 2", false});
        Rational dm2 = in.before.m2 - in.after[i].m2;
        if (dm2 != dm2_row)
          out.push_back({in.seq, 13, static_cast<int>(i), "dm2_row",
                         "observed dm2 " + dm2.to_decimal() + " vs row " +
                             dm2_row.to_decimal(),
                         false});
      }
      if (in.q == 2 && in.before.M.sign() != 0)
        out.push_back({in.seq, 13, -1, "r13_M_zero",
                       "M = " + in.before.M.to_decimal() + " nonzero at a q=2 final branch",
                       false});
      break;
    }
    case 2:
    case 3:
    case 8:
    case 9: {
      if (!in.reduction || in.q != 2) break;
      check(in.after.size() == 1, "reduction audit expects a single post state");
      long dm = in.before.m - in.after[0].m;
      Rational dM = in.before.M - in.after[0].M;
      if (dm != 2 * in.pairs_touched)
        out.push_back({in.seq, in.rule, 0, "reduction_dm",
                       "observed dm " + std::to_string(dm) + " vs 2*" +
                           std::to_string(in.pairs_touched),
                       false});
      if (dM > Rational(4) * Rational(in.pairs_touched))
        out.push_back({in.seq, in.rule, 0, "reduction_dM",
                       "observed dM " + dM.to_decimal() + " above cap " +
                           std::to_string(4 * in.pairs_touched),
                       false});
      break;
    }
    case 0:
    case 1:
    case 10:
      break;
    default:
      fail(errc::unknown_rule, "audit_step: rule " + std::to_string(in.rule));
  }
  (void)beta;
  return out;
}

// Lemma-1 subtree bound with a small relative guard for the float evaluation.
inline bool lemma1_subtree_check(long m, const Rational& M, long leaves,
                                 double guard = 1e-9) {
  double bound = std::pow(std::sqrt(2.0), static_cast<double>(m)) *
                 std::pow(0.9808, M.to_double());
  return static_cast<double>(leaves) <= bound * (1.0 + guard);
}

// Stream consumer: row checks per event, Lemma-1 subtree accounting per
// q'=2 switch, Lemma-2 samples at every switch.
class Auditor : public TraceSink {
 public:
  explicit Auditor(Rational alpha = kDefaultAlpha, Rational beta = kDefaultBeta)
      : alpha_(std::move(alpha)), beta_(std::move(beta)) {}

  struct SubtreeCheck {
    long m = 0;
    Rational M;
    long leaves = 0;
    double bound = 0;
    bool ok = false;
  };

  void on_event(const TraceEvent& ev) override {
    AuditStepInput in;
    in.rule = ev.rule;
    in.q = ev.q;
    in.u2_defined = ev.u2_defined;
    in.cycle_len = ev.cycle_len;
    in.seq = ev.seq;
    in.before = ev.before;
    if (ev.branching) {
      in.after = ev.branch_after;
    } else if (ev.rule == 2 || ev.rule == 3 || ev.rule == 8 || ev.rule == 9) {
      in.reduction = true;
      in.pairs_touched = ev.pairs_touched;
      in.after = {ev.after};
    }
    auto vs = audit_step(in, alpha_, beta_);
    violations_.insert(violations_.end(), vs.begin(), vs.end());

    if (ev.rule == 1) {
      if (frame_open_) ++frame_leaves_;
      ++total_leaves_;
    }
    if (ev.rule == 10) {
      Rational slack =
          ev.before.M - (Rational(ev.before.m) - Rational(3) * Rational(ev.before.n_vcc1));
      lemma2_samples_.push_back({!slack.is_negative(), slack});
      if (slack.is_negative())
        violations_.push_back({ev.seq, 10, -1, "lemma2",
                               "negative slack " + slack.to_decimal(), false});
      if (ev.qprime == 1 && ev.before.m2 > ev.before.m1)
        violations_.push_back({ev.seq, 10, -1, "m2_le_m1",
                               "m2 " + ev.before.m2.to_decimal() + " exceeds m1 " +
                                   ev.before.m1.to_decimal(),
                               false});
      if (ev.qprime == 2) {
        check(!frame_open_, "q=2 subtrees never nest");
        frame_open_ = true;
        frame_depth_ = depth_;
        frame_m_ = ev.before.m;
        frame_M_ = ev.before.M;
        frame_leaves_ = 0;
      }
    }
  }

  void on_child_enter(int) override { ++depth_; }

  void on_child_exit(int) override {
    --depth_;
    if (frame_open_ && depth_ == frame_depth_) {
      SubtreeCheck sc;
      sc.m = frame_m_;
      sc.M = frame_M_;
      sc.leaves = frame_leaves_;
      sc.bound = std::pow(std::sqrt(2.0), static_cast<double>(sc.m)) *
                 std::pow(0.9808, sc.M.to_double());
      sc.ok = lemma1_subtree_check(sc.m, sc.M, sc.leaves);
      if (!sc.ok)
        violations_.push_back({0, 10, -1, "lemma1",
                               std::to_string(sc.leaves) + " leaves above bound " +
                                   std::to_string(sc.bound),
                               false});
      subtree_checks_.push_back(std::move(sc));
      frame_open_ = false;
    }
  }

  const std::vector<AuditViolation>& violations() const { return violations_; }
  const std::vector<SubtreeCheck>& lemma1_checks() const { return subtree_checks_; }
  const std::vector<std::pair<bool, Rational>>& lemma2_samples() const {
    return lemma2_samples_;
  }

  long paper_violations() const {
    long n = 0;
    for (const auto& v : violations_)
      if (!v.derived) ++n;
    return n;
  }
  long derived_violations() const {
    long n = 0;
    for (const auto& v : violations_)
      if (v.derived) ++n;
    return n;
  }

 private:
  Rational alpha_, beta_;
  std::vector<AuditViolation> violations_;
  std::vector<SubtreeCheck> subtree_checks_;
  std::vector<std::pair<bool, Rational>> lemma2_samples_;
  int depth_ = 0;
  bool frame_open_ = false;
  int frame_depth_ = 0;
  long frame_m_ = 0;
  Rational frame_M_;
  long frame_leaves_ = 0;
  long total_leaves_ = 0;
};

struct BranchReport {
  long leaves = 0;
  long nodes = 0;
  std::map<std::string, long> rule_counts;
  int t = 0;
  Rational m1_root;
  Rational m2_at_switch;
  long m_at_switch = 0;
  Rational M_at_switch;
  std::vector<AuditViolation> audit_failures;
  long robust_fallbacks = 0;
};

inline BranchReport make_report(const SolveStats& stats, const Auditor* auditor = nullptr) {
  BranchReport r;
  r.leaves = stats.leaves;
  r.nodes = stats.nodes;
  for (const auto& [rule, count] : stats.rule_counts)
    r.rule_counts[std::to_string(rule)] = count;
  r.t = stats.t;
  r.m1_root = stats.m1_root;
  r.m2_at_switch = stats.m2_at_switch;
  r.m_at_switch = stats.m_at_switch;
  r.M_at_switch = stats.M_at_switch;
  r.robust_fallbacks = stats.robust_fallbacks;
  if (auditor) r.audit_failures = auditor->violations();
  return r;
}

inline nlohmann::json report_json(const BranchReport& r) {
  nlohmann::json j;
  j["leaves"] = r.leaves;
  j["nodes"] = r.nodes;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [rule, count] : r.rule_counts) counts[rule] = count;
  j["rule_counts"] = counts;
  j["t"] = r.t;
  j["m1_root"] = r.m1_root.to_decimal();
  j["m2_at_switch"] = r.m2_at_switch.to_decimal();
  j["m_at_switch"] = Rational(r.m_at_switch).to_decimal();
  j["M_at_switch"] = r.M_at_switch.to_decimal();
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& v : r.audit_failures) {
    nlohmann::json f;
    f["seq"] = v.seq;
    f["rule"] = v.rule;
    f["branch"] = v.branch;
    f["kind"] = v.kind;
    f["detail"] = v.detail;
    f["derived"] = v.derived;
    fails.push_back(f);
  }
  j["audit_failures"] = fails;
  j["robust_fallbacks"] = r.robust_fallbacks;
  return j;
}

// ratio of observed leaves to the 1.402^m1 budget, plus the constant that
// glues the lemma bounds to 1.402.
inline std::pair<bool, double> global_bound_check(const BranchReport& r,
                                                  const Rational& beta = kDefaultBeta) {
  double budget = std::pow(1.402, r.m1_root.to_double());
  double ratio = static_cast<double>(r.leaves) / budget;
  double combine = std::sqrt(2.0) * std::pow(0.9808, 1.0 - 3.0 * beta.to_double());
  bool ok = ratio <= 1.0 && combine <= 1.402;
  return {ok, ratio};
}

}  // namespace wvc
