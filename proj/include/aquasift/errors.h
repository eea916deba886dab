#ifndef AQUASIFT_ERRORS_H_
#define AQUASIFT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace aquasift {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller-supplied argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed input record; `line()` is 1-based.
class IngestError : public Error {
 public:
  IngestError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  DuplicateIdError(const std::string& post_id, std::size_t line)
      : Error("duplicate post_id \"" + post_id + "\" at line " +
              std::to_string(line)),
        post_id_(post_id),
        line_(line) {}
  const std::string& post_id() const { return post_id_; }
  std::size_t line() const { return line_; }

 private:
  std::string post_id_;
  std::size_t line_;
};

class UnlabeledPostError : public Error {
 public:
  explicit UnlabeledPostError(const std::string& post_id)
      : Error("post \"" + post_id + "\" has no label"), post_id_(post_id) {}
  const std::string& post_id() const { return post_id_; }

 private:
  std::string post_id_;
};

class BalancingError : public Error {
 public:
  using Error::Error;
};

// Two keyed collections that must share ids do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what)
      : Error("training diverged in epoch " + std::to_string(epoch) + ": " +
              what),
        epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

// Operation invoked on an object in the wrong lifecycle state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Failure inside a pipeline stage; the message is prefixed with the stage.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace aquasift

#endif  // AQUASIFT_ERRORS_H_
