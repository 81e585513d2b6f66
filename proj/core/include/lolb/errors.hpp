#pragma once

#include <stdexcept>
#include <string>

namespace lolb {

/// Thrown when supp p is not contained in supp q: the divergence is +inf on
/// a whole neighborhood of the center, so no finite bound exists.
class support_violation : public std::domain_error {
 public:
  explicit support_violation(const std::string& what) : std::domain_error(what) {}
};

}  // namespace lolb
