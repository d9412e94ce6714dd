#pragma once

#include <stdexcept>
#include <string>

namespace warpgraph {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be opened / read / written.
struct IoError : Error {
  using Error::Error;
};

// File opened fine but the contents violate the format contract
// (bad magic, header/payload mismatch, truncation).
struct FormatError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NonPositiveDepth : Error {
  using Error::Error;
};

struct BehindCamera : Error {
  using Error::Error;
};

struct OutOfBounds : Error {
  using Error::Error;
};

// Bilinear sampling touched a masked-invalid corner cell.
struct InvalidCorner : Error {
  using Error::Error;
};

struct GridTooLarge : Error {
  using Error::Error;
};

struct ResolutionMismatch : Error {
  using Error::Error;
};

// p'Ap <= 0 inside PCG: the input was not SPD.
struct BreakdownError : Error {
  using Error::Error;
};

struct SingularBlock : Error {
  SingularBlock(const std::string& msg, int node) : Error(msg), node_index(node) {}
  int node_index;
};

struct FactorizationFailed : Error {
  using Error::Error;
};

struct NotSPD : Error {
  using Error::Error;
};

struct NonFinite : Error {
  using Error::Error;
};

struct NoValidNodes : Error {
  using Error::Error;
};

struct NoCovisiblePixels : Error {
  using Error::Error;
};

struct DegenerateScene : Error {
  using Error::Error;
};

}  // namespace warpgraph
