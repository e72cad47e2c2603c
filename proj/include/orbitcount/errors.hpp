#pragma once

#include <stdexcept>
#include <string>

namespace orbitcount {

// Base class for all library errors.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A word uses a symbol outside the presentation's alphabet.
struct alphabet_error : error {
  using error::error;
};

// A word reduces to the empty word; it has no cyclic class.
struct trivial_class_error : error {
  using error::error;
};

// The signature (or a requested operation on it) is not supported.
struct unsupported_signature_error : error {
  using error::error;
};

// Fenchel-Nielsen data does not describe a valid gluing.
struct structure_error : error {
  using error::error;
};

// A matrix expected to be hyperbolic has |trace| <= 2 + tolerance.
struct not_hyperbolic_error : error {
  using error::error;
};

// A numeric decision stayed ambiguous after interval escalation.
struct needs_exact_error : error {
  using error::error;
};

// A functional that must be positive on multicurves is not.
struct positivity_error : error {
  using error::error;
};

// Lattice enumeration box touched the constraint region and retries ran out.
struct box_saturation_error : error {
  using error::error;
};

// A precondition of an operation was violated by the caller.
struct precondition_error : error {
  using error::error;
};

// Configuration file problems (missing fields, bad values, bad schema).
struct config_error : error {
  using error::error;
};

}  // namespace orbitcount
