#include "extree/error.hpp"

namespace extree {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::WrongEdgeCount: return "WrongEdgeCount";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NodeOutOfRange: return "NodeOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::NegativeGamma: return "NegativeGamma";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::KOutOfRange: return "KOutOfRange";
    case Errc::AllZeroWeights: return "AllZeroWeights";
    case Errc::ParseError: return "ParseError";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::IoError: return "IoError";
    case Errc::NoFiniteTree: return "NoFiniteTree";
    case Errc::SamplerCapExceeded: return "SamplerCapExceeded";
  }
  return "Unknown";
}

bool is_numerical(Errc code) noexcept {
  return code == Errc::NoFiniteTree || code == Errc::SamplerCapExceeded;
}

}  // namespace extree
