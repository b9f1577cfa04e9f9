#include "compumat/error.hpp"

namespace compumat {

ParseError::ParseError(const std::string& what, int line)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace compumat
