#pragma once

#include <vector>

#include "wvc/cover.hpp"
#include "wvc/rational.hpp"

namespace wvc {

// Vertices a rule fired on; -1 for slots the rule does not use.
struct RuleWitness {
  VertexId v = -1, v_partner = -1;
  VertexId x1 = -1, x2 = -1;
  VertexId u1 = -1, u1_partner = -1, u2 = -1, u2_partner = -1;
  std::vector<VertexId> component;           // rule 2 component / rule 7 cycle
  std::array<VertexId, 3> triangle{-1, -1, -1};
  std::array<VertexId, 3> triangle2{-1, -1, -1};
  std::array<VertexId, 2> f_pair{-1, -1};
  VertexId f_witness = -1;
};

// One record per rule application. Branching events additionally carry the
// measures of every composed branch, evaluated eagerly against the same graph
// (deletions applied, measured, restored) including the bounded follow-up
// reductions the branch forces; reduction events carry the post-state.
struct TraceEvent {
  long seq = 0;
  int depth = 0;
  int rule = 0;  // 1..13, or 0 for the robust-mode B2 fallback
  int q = 0;
  int child_count = 0;
  bool branching = false;
  RuleWitness witness;

  Measures before;
  Measures after;                      // reductions only
  std::vector<Measures> branch_after;  // branching rules only
  int pairs_touched = 0;               // reductions: CC2 pairs hit by the event

  int cycle_len = 0;      // rule 7
  bool u2_defined = false;  // rules 11/12
  int qprime = -1;        // rule 10
  bool fallback = false;  // robust-mode B2 in the rule 4/5 slot
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_event(const TraceEvent& ev) = 0;
  virtual void on_child_enter(int index) { (void)index; }
  virtual void on_child_exit(int index) { (void)index; }
};

}  // namespace wvc
