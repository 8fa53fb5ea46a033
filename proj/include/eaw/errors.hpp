#ifndef EAW_ERRORS_HPP
#define EAW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eaw {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct divergence_error : std::runtime_error {
  long step;
  explicit divergence_error(long step_)
      : std::runtime_error("non-finite state at step " + std::to_string(step_) +
                           " (time step too large for the CFL restriction?)"),
        step(step_) {}
};

}  // namespace eaw

#endif
