#ifndef CLB_ERROR_HPP_
#define CLB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace clb {

// Rejected input: a precondition of the called operation does not hold.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested feature exists in the model catalogue but not for this operation.
class Unsupported : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A configured memory/size cap would be exceeded. The message names the cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace clb

#endif  // CLB_ERROR_HPP_
