#ifndef THEORIA_ERROR_HPP
#define THEORIA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace theoria {

// All faults surfaced to callers go through this one exception type; the
// kind drives CLI exit codes (parse/validation -> 2, io -> 3).
class Error : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation, Store, Engine, Io };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Error(Kind kind, std::string message, std::string file, int line, int column)
      : std::runtime_error(format(file, line, column, message)),
        kind_(kind),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  bool has_location() const { return line_ > 0; }

 private:
  static std::string format(const std::string& file, int line, int column,
                            const std::string& message) {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column) +
           ": " + message;
  }

  Kind kind_;
  std::string file_;
  int line_ = 0;
  int column_ = 0;
};

}  // namespace theoria

#endif  // THEORIA_ERROR_HPP
