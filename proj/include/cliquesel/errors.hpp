#pragma once

#include <stdexcept>
#include <string>

namespace cliquesel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// graph parsing
struct MalformedHeader : Error { using Error::Error; };
struct MalformedLine : Error { using Error::Error; };
struct NodeOutOfRange : Error { using Error::Error; };
struct EmptyGraph : Error { using Error::Error; };

// features / matrices
struct TooFewRows : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteFeature : Error { using Error::Error; };

// dataset pipeline
struct AllUnsolved : Error { using Error::Error; };
struct EmptyResult : Error { using Error::Error; };
struct TooFewInstances : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };

// learning
struct EmptyData : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };
struct SingleClass : Error { using Error::Error; };
struct UnfitModel : Error { using Error::Error; };
struct ModeMismatch : Error { using Error::Error; };
struct BothEncodersOff : Error { using Error::Error; };
struct VariantMismatch : Error { using Error::Error; };

// metrics
struct LengthMismatch : Error { using Error::Error; };
struct LabelOutOfRange : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };

// cli
struct NoInputs : Error { using Error::Error; };

}  // namespace cliquesel
