#pragma once

#include <stdexcept>
#include <string>

namespace irdp {

// Bad user input: malformed documents, schema violations, invalid problems or
// configurations. The CLI maps this to exit code 2; everything else to 1.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace irdp
