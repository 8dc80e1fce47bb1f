#pragma once

#include <optional>

#include "bvquad/error.hpp"

// Kind of the bvquad::Error thrown by fn, or nullopt if it returns normally.
template <class Fn>
std::optional<bvquad::ErrorKind> thrown_kind(Fn&& fn) {
  try {
    fn();
  } catch (const bvquad::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
