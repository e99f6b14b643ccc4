#pragma once

#include <stdexcept>
#include <string>

namespace beamflat {

/// Failure of a checked contract. `id()` names the violated check so that
/// command-line front ends can report it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string id, const std::string& what)
      : std::runtime_error(id + ": " + what), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

}  // namespace beamflat
