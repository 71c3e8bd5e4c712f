#include "acpkit/comm.hpp"

#include <vector>

#include "acpkit/errors.hpp"

namespace acp {

std::string to_string(const MaybeAction& a) { return a ? a->name : "delta"; }

void CommFn::require_known(const Action& a) const {
  if (!knows(a)) {
    throw ValidationError(ValidationError::Kind::UnknownAction,
                          "action " + a.name + " is not in the alphabet");
  }
}

void CommFn::set(const Action& a, const Action& b, MaybeAction result) {
  require_known(a);
  require_known(b);
  if (result) require_known(*result);
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  table_[std::move(key)] = std::move(result);
}

MaybeAction CommFn::gamma(const Action& a, const Action& b) const {
  require_known(a);
  require_known(b);
  auto it = table_.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  return it == table_.end() ? std::nullopt : it->second;
}

MaybeAction CommFn::gamma(const MaybeAction& a, const MaybeAction& b) const {
  if (a) require_known(*a);
  if (b) require_known(*b);
  if (!a || !b) return std::nullopt;
  return gamma(*a, *b);
}

std::optional<AssociativityViolation> find_associativity_violation(const CommFn& f) {
  std::vector<MaybeAction> domain(f.alphabet().begin(), f.alphabet().end());
  domain.push_back(std::nullopt);
  for (const auto& a : domain) {
    for (const auto& b : domain) {
      const MaybeAction ab = f.gamma(a, b);
      for (const auto& c : domain) {
        MaybeAction left = f.gamma(ab, c);
        MaybeAction right = f.gamma(a, f.gamma(b, c));
        if (left != right) return AssociativityViolation{a, b, c, left, right};
      }
    }
  }
  return std::nullopt;
}

void validate_comm(const CommFn& f) {
  if (auto v = find_associativity_violation(f)) {
    const std::string a = to_string(v->a), b = to_string(v->b), c = to_string(v->c);
    throw ValidationError(ValidationError::Kind::NotAssociative,
                          "communication function is not associative: gamma(gamma(" + a + ", " +
                              b + "), " + c + ") = " + to_string(v->left) + " but gamma(" + a +
                              ", gamma(" + b + ", " + c + ")) = " + to_string(v->right));
  }
}

}  // namespace acp
