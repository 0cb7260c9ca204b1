#include "rankrec/errors.hpp"

namespace rankrec {

ParseError::ParseError(Kind kind, std::string message, int line, int column)
    : std::runtime_error(line > 0 ? message + " at line " + std::to_string(line) + ", column " +
                                        std::to_string(column)
                                  : message),
      kind_(kind),
      line_(line),
      column_(column) {}

}  // namespace rankrec
