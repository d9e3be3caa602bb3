#pragma once

#include <functional>
#include <string>

#include <gtest/gtest.h>

#include "rbk/error.hpp"
#include "rbk/scenario.hpp"

namespace rbk::testing {

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rbk::Error";
  return ErrorCode::Io;
}

inline Model shipped(const std::string& id) { return load_shipped(RBK_SCENARIO_DIR, id).model(); }

inline Model make(const MomentPolytope& P, SubvarietyKind kind, const WeightSymbol& w, int n = 129, int axis = 0) {
  SubvarietyDescriptor sub;
  sub.kind = kind;
  sub.axis = axis;
  sub.ambient = P;
  return build_model(P, sub, w, LogGrid::make(P.dim(), n, w.halfwidth));
}

}  // namespace rbk::testing
