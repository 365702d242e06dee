#pragma once

#include <stdexcept>
#include <string>

namespace wvc {

enum class errc {
  duplicate_edge,
  self_loop,
  id_out_of_range,
  vertex_not_alive,
  out_of_order_restore,
  not_a_vertex_cover,
  invalid_coloring,
  too_large,
  component_too_large,
  not_a_component,
  non_subcubic,
  f_property_violation,
  stuck_state,
  witness_not_found,
  gen_failure,
  parse_error,
  unknown_rule,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::duplicate_edge: return "duplicate_edge";
    case errc::self_loop: return "self_loop";
    case errc::id_out_of_range: return "id_out_of_range";
    case errc::vertex_not_alive: return "vertex_not_alive";
    case errc::out_of_order_restore: return "out_of_order_restore";
    case errc::not_a_vertex_cover: return "not_a_vertex_cover";
    case errc::invalid_coloring: return "invalid_coloring";
    case errc::too_large: return "too_large";
    case errc::component_too_large: return "component_too_large";
    case errc::not_a_component: return "not_a_component";
    case errc::non_subcubic: return "non_subcubic";
    case errc::f_property_violation: return "f_property_violation";
    case errc::stuck_state: return "stuck_state";
    case errc::witness_not_found: return "witness_not_found";
    case errc::gen_failure: return "gen_failure";
    case errc::parse_error: return "parse_error";
    case errc::unknown_rule: return "unknown_rule";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Invariant breaches that indicate a bug rather than bad input.
inline void check(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(std::string("internal invariant violated: ") + msg);
}

}  // namespace wvc
