#pragma once

#include <stdexcept>
#include <string>

namespace wallperc {

enum class Err {
  // graph
  DisconnectedGraph,
  SelfLoop,
  DuplicateEdge,
  VertexOutOfRange,
  EmptySpec,
  SizeOverflow,
  // kernel
  NonSymmetric,
  NonzeroDiagonal,
  NegativeEntry,
  NonpositiveLambda,
  NotCND,
  TooLarge,
  VariationViolated,
  // walls
  SizeMismatch,
  DegenerateCloud,
  ZeroSamples,
  NotAnEdge,
  // percolation
  EmptyFamily,
  NegativeTime,
  TooManyWalls,
  TooManyEdges,
  BadProbability,
  NonIncreasingEvent,
  BadPermutation,
  // compression
  ZeroTwoPoint,
  BadAlpha,
  EmptyGrid,
  NonpositiveGamma,
  // io
  ParseError,
  IoError,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace wallperc
