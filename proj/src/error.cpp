#include "wallperc/error.hpp"

namespace wallperc {

const char* err_name(Err e) {
  switch (e) {
    case Err::DisconnectedGraph: return "DisconnectedGraph";
    case Err::SelfLoop: return "SelfLoop";
    case Err::DuplicateEdge: return "DuplicateEdge";
    case Err::VertexOutOfRange: return "VertexOutOfRange";
    case Err::EmptySpec: return "EmptySpec";
    case Err::SizeOverflow: return "SizeOverflow";
    case Err::NonSymmetric: return "NonSymmetric";
    case Err::NonzeroDiagonal: return "NonzeroDiagonal";
    case Err::NegativeEntry: return "NegativeEntry";
    case Err::NonpositiveLambda: return "NonpositiveLambda";
    case Err::NotCND: return "NotCND";
    case Err::TooLarge: return "TooLarge";
    case Err::VariationViolated: return "VariationViolated";
    case Err::SizeMismatch: return "SizeMismatch";
    case Err::DegenerateCloud: return "DegenerateCloud";
    case Err::ZeroSamples: return "ZeroSamples";
    case Err::NotAnEdge: return "NotAnEdge";
    case Err::EmptyFamily: return "EmptyFamily";
    case Err::NegativeTime: return "NegativeTime";
    case Err::TooManyWalls: return "TooManyWalls";
    case Err::TooManyEdges: return "TooManyEdges";
    case Err::BadProbability: return "BadProbability";
    case Err::NonIncreasingEvent: return "NonIncreasingEvent";
    case Err::BadPermutation: return "BadPermutation";
    case Err::ZeroTwoPoint: return "ZeroTwoPoint";
    case Err::BadAlpha: return "BadAlpha";
    case Err::EmptyGrid: return "EmptyGrid";
    case Err::NonpositiveGamma: return "NonpositiveGamma";
    case Err::ParseError: return "ParseError";
    case Err::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace wallperc
