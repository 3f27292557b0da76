#pragma once

#include <stdexcept>
#include <string>

namespace robustci {

// Malformed or inconsistent caller input (bad shapes, out-of-range letters, ...).
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap was hit; the message names the bound.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mathematical precondition failed (e.g. a log of a zero kernel entry).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An operation was called on data that breaks its documented contract.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace robustci
