#ifndef SQPSIM_SIM_ERRORS_H_
#define SQPSIM_SIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sqpsim {

// Bad user input: scenario files, link traces, CSV inputs. The message names
// the offending file, line, or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_ERRORS_H_
