#pragma once

#include <stdexcept>
#include <string>

namespace qd {

struct InvalidGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpacingTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NewtonDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewNodes : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewStates : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ColdStartAtCryo : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MaxIterExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyEnergyGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LevelNeverReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergentStationaryDistribution : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace qd
