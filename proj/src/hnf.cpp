#include "acpkit/hnf.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "acpkit/errors.hpp"
#include "acpkit/syntax.hpp"

namespace acp {
namespace {

constexpr std::array<std::string_view, 22> kAxiomNames = {
    "A1",  "A2",  "A3",  "A4",  "A5",  "A6",  "A7",  "CM1", "CM2", "CM3", "CM4",
    "CM5", "CM6", "CM7", "CM8", "CM9", "CF",  "D1",  "D2",  "D3",  "D4",  "RDP",
};

// Nesting guard for the normaliser; deep enough for any realistic term.
constexpr std::size_t kMaxDepth = 20000;

bool is_constant(const Term& t) { return t.is(Op::Inaction) || t.is(Op::Action); }

bool is_summand(const Term& t) {
  return t.is(Op::Action) || (t.is(Op::Seq) && t.left().is(Op::Action));
}

MaybeAction constant_value(const Term& t) {
  if (t.is(Op::Action)) return t.action_name();
  return std::nullopt;
}

Term constant_term(const MaybeAction& a) { return a ? Term::action(*a) : Term::delta(); }

class PathGuard {
 public:
  PathGuard(Path& p, std::uint8_t i) : p_(p) { p_.push_back(i); }
  ~PathGuard() { p_.pop_back(); }
  PathGuard(const PathGuard&) = delete;
  PathGuard& operator=(const PathGuard&) = delete;

 private:
  Path& p_;
};

template <class F>
Term in_child(Path& p, std::uint8_t i, F&& fn) {
  PathGuard g(p, i);
  return fn();
}

class Normalizer {
 public:
  Normalizer(const CommFn& f, const HnfOptions& opts) : f_(f), opts_(opts) {}

  HnfResult run(const Term& input) {
    Path path;
    Term normal = norm(input, path);

    HnfResult out;
    std::vector<Term> summands;
    if (!normal.is(Op::Inaction)) summands = flatten_alt(normal);
    for (const auto& s : summands) {
      if (s.is(Op::Action)) {
        out.hnf.terminals.push_back(s.action_name());
      } else {
        out.hnf.branches.emplace_back(s.left().action_name(), s.right());
      }
    }
    Term final_term = arrange(normal, summands);
    if (!(final_term == hnf_to_term(out.hnf))) {
      throw std::logic_error("head_normal_form: final arrangement does not match");
    }
    out.trace = std::move(trace_);
    out.steps = steps_;
    return out;
  }

 private:
  Term step(Axiom ax, const Path& p, const Term& before, Term after) {
    if (++steps_ > opts_.fuel) {
      throw BudgetError(BudgetError::Kind::FuelExhausted,
                        "head normal form needs more than " + std::to_string(opts_.fuel) +
                            " rewrite steps");
    }
    if (opts_.record_trace) trace_.push_back({ax, p, before, after});
    return after;
  }

  // Brings t (located at path p) into the internal shape: delta, or a
  // right-nested sum of summands `a` and `a . t'`.
  Term norm(const Term& t, Path& p) {
    if (++depth_ > kMaxDepth) {
      throw BudgetError(BudgetError::Kind::FuelExhausted,
                        "head normal form recursion exceeded depth " + std::to_string(kMaxDepth));
    }
    Term r = norm_inner(t, p);
    --depth_;
    return r;
  }

  Term norm_inner(const Term& t, Path& p) {
    switch (t.op()) {
      case Op::Inaction:
      case Op::Action:
        return t;
      case Op::Var:
        throw ValidationError(ValidationError::Kind::UnguardedTerm,
                              "free variable " + t.var_name() + " reached while normalising");
      case Op::Alt: {
        Term l = norm_child(t.left(), p, 0);
        Term r = norm_child(t.right(), p, 1);
        return concat(Term::alt(std::move(l), std::move(r)), p);
      }
      case Op::Seq: {
        Term l = norm_child(t.left(), p, 0);
        return seq_dist(Term::seq(std::move(l), t.right()), p);
      }
      case Op::LeftMerge: {
        Term l = norm_child(t.left(), p, 0);
        return lm_dist(Term::left_merge(std::move(l), t.right()), p);
      }
      case Op::CommMerge: {
        Term l = norm_child(t.left(), p, 0);
        Term r = norm_child(t.right(), p, 1);
        return comm_dist(Term::comm_merge(std::move(l), std::move(r)), p);
      }
      case Op::Par: {
        const Term& x = t.left();
        const Term& y = t.right();
        Term expanded = step(Axiom::CM1, p, t,
                             Term::alt(Term::alt(Term::left_merge(x, y), Term::left_merge(y, x)),
                                       Term::comm_merge(x, y)));
        return norm(expanded, p);
      }
      case Op::Encap: {
        Term b = norm_child(t.body(), p, 0);
        return enc_dist(Term::encap(t.blocked(), std::move(b)), p);
      }
      case Op::Rec: {
        const Term* rhs = t.spec().find(t.var_name());
        Term unfolded = step(Axiom::RDP, p, t, subst_spec(*rhs, t.spec_ptr()));
        return norm(unfolded, p);
      }
    }
    throw std::logic_error("unreachable");
  }

  Term norm_child(const Term& c, Path& p, std::uint8_t i) {
    return in_child(p, i, [&] { return norm(c, p); });
  }

  // Alt(N1, N2) with both operands in internal shape.
  Term concat(const Term& t, Path& p) {
    const Term& l = t.left();
    const Term& r = t.right();
    if (l.is(Op::Inaction)) {
      Term swapped = step(Axiom::A1, p, t, Term::alt(r, l));
      return step(Axiom::A6, p, swapped, r);
    }
    if (r.is(Op::Inaction)) return step(Axiom::A6, p, t, l);
    if (is_summand(l)) return t;
    // l = s + rest
    const Term& s = l.left();
    Term inner = Term::alt(l.right(), r);
    step(Axiom::A2, p, t, Term::alt(s, inner));
    return Term::alt(s, in_child(p, 1, [&] { return concat(inner, p); }));
  }

  // Seq(N1, y) with N1 in internal shape.
  Term seq_dist(const Term& t, Path& p) {
    const Term& l = t.left();
    const Term& y = t.right();
    switch (l.op()) {
      case Op::Inaction:
        return step(Axiom::A7, p, t, Term::delta());
      case Op::Action:
        return t;
      case Op::Seq:
        return step(Axiom::A5, p, t, Term::seq(l.left(), Term::seq(l.right(), y)));
      case Op::Alt: {
        Term ls = Term::seq(l.left(), y);
        Term rs = Term::seq(l.right(), y);
        step(Axiom::A4, p, t, Term::alt(ls, rs));
        Term a = in_child(p, 0, [&] { return seq_dist(ls, p); });
        Term b = in_child(p, 1, [&] { return seq_dist(rs, p); });
        return Term::alt(std::move(a), std::move(b));
      }
      default:
        throw std::logic_error("seq_dist: operand not normalised");
    }
  }

  // LeftMerge(N1, y) with N1 in internal shape.
  Term lm_dist(const Term& t, Path& p) {
    const Term& l = t.left();
    const Term& y = t.right();
    switch (l.op()) {
      case Op::Inaction: {
        Term s = step(Axiom::CM2, p, t, Term::seq(l, y));
        return step(Axiom::A7, p, s, Term::delta());
      }
      case Op::Action:
        return step(Axiom::CM2, p, t, Term::seq(l, y));
      case Op::Seq:
        return step(Axiom::CM3, p, t, Term::seq(l.left(), Term::par(l.right(), y)));
      case Op::Alt: {
        Term lm = Term::left_merge(l.left(), y);
        Term rm = Term::left_merge(l.right(), y);
        step(Axiom::CM4, p, t, Term::alt(lm, rm));
        Term a = in_child(p, 0, [&] { return lm_dist(lm, p); });
        Term b = in_child(p, 1, [&] { return lm_dist(rm, p); });
        return Term::alt(std::move(a), std::move(b));
      }
      default:
        throw std::logic_error("lm_dist: operand not normalised");
    }
  }

  // CommMerge(c1, c2) of two constants, rewritten by CF.
  Term comm_constants(const Term& t, const Path& p) {
    MaybeAction g = f_.gamma(constant_value(t.left()), constant_value(t.right()));
    return step(Axiom::CF, p, t, constant_term(g));
  }

  // Seq(CommMerge(c1, c2), z): evaluate the head with CF, then A7 if it
  // produced inaction.
  Term comm_head(const Term& t, Path& p) {
    Term head = in_child(p, 0, [&] { return comm_constants(t.left(), p); });
    Term s = Term::seq(head, t.right());
    if (head.is(Op::Inaction)) return step(Axiom::A7, p, s, Term::delta());
    return s;
  }

  // CommMerge(N1, N2) with both operands in internal shape.
  Term comm_dist(const Term& t, Path& p) {
    const Term& l = t.left();
    const Term& r = t.right();
    if (l.is(Op::Alt) || r.is(Op::Alt)) {
      const bool split_left = l.is(Op::Alt);
      Term a = split_left ? Term::comm_merge(l.left(), r) : Term::comm_merge(l, r.left());
      Term b = split_left ? Term::comm_merge(l.right(), r) : Term::comm_merge(l, r.right());
      step(split_left ? Axiom::CM8 : Axiom::CM9, p, t, Term::alt(a, b));
      Term na = in_child(p, 0, [&] { return comm_dist(a, p); });
      Term nb = in_child(p, 1, [&] { return comm_dist(b, p); });
      return concat(Term::alt(std::move(na), std::move(nb)), p);
    }
    const bool lc = is_constant(l);
    const bool rc = is_constant(r);
    if (lc && rc) return comm_constants(t, p);
    if (!lc && rc) {
      Term s = step(Axiom::CM5, p, t, Term::seq(Term::comm_merge(l.left(), r), l.right()));
      return comm_head(s, p);
    }
    if (lc && !rc) {
      Term s = step(Axiom::CM6, p, t, Term::seq(Term::comm_merge(l, r.left()), r.right()));
      return comm_head(s, p);
    }
    Term s = step(Axiom::CM7, p, t,
                  Term::seq(Term::comm_merge(l.left(), r.left()), Term::par(l.right(), r.right())));
    return comm_head(s, p);
  }

  // Encap(H, c) for a constant c, by D1 or D2.
  Term enc_constant(const Term& t, const Path& p) {
    const Term& c = t.body();
    if (c.is(Op::Action) && t.blocked().count(c.action_name())) {
      return step(Axiom::D2, p, t, Term::delta());
    }
    return step(Axiom::D1, p, t, c);
  }

  // Encap(H, N) with N in internal shape.
  Term enc_dist(const Term& t, Path& p) {
    const Term& n = t.body();
    const ActionSet& h = t.blocked();
    switch (n.op()) {
      case Op::Inaction:
      case Op::Action:
        return enc_constant(t, p);
      case Op::Seq: {
        Term head_enc = Term::encap(h, n.left());
        Term tail_enc = Term::encap(h, n.right());
        step(Axiom::D4, p, t, Term::seq(head_enc, tail_enc));
        Term head = in_child(p, 0, [&] { return enc_constant(head_enc, p); });
        Term s = Term::seq(head, tail_enc);
        if (head.is(Op::Inaction)) return step(Axiom::A7, p, s, Term::delta());
        return s;
      }
      case Op::Alt: {
        Term a = Term::encap(h, n.left());
        Term b = Term::encap(h, n.right());
        step(Axiom::D3, p, t, Term::alt(a, b));
        Term na = in_child(p, 0, [&] { return enc_dist(a, p); });
        Term nb = in_child(p, 1, [&] { return enc_dist(b, p); });
        return concat(Term::alt(std::move(na), std::move(nb)), p);
      }
      default:
        throw std::logic_error("enc_dist: operand not normalised");
    }
  }

  // Reorders the right-nested internal shape into the left-nested
  // branches-then-terminals layout of hnf_to_term, with A1 and A2 only.
  Term arrange(Term cur, std::vector<Term> items) {
    if (items.size() < 2) return cur;
    auto is_terminal = [](const Term& s) { return s.is(Op::Action); };
    bool swapped = true;
    while (swapped) {
      swapped = false;
      for (std::size_t i = 0; i + 1 < items.size(); ++i) {
        if (!is_terminal(items[i]) || is_terminal(items[i + 1])) continue;
        Path p(i, 1);
        const Term sub = subterm_at(cur, p);
        if (i + 2 == items.size()) {
          cur = replace_at(cur, p, step(Axiom::A1, p, sub, Term::alt(sub.right(), sub.left())));
        } else {
          const Term& s0 = sub.left();
          const Term& s1 = sub.right().left();
          const Term& rest = sub.right().right();
          Term t1 = step(Axiom::A2, p, sub, Term::alt(Term::alt(s0, s1), rest));
          Path pl = p;
          pl.push_back(0);
          Term t2 = Term::alt(step(Axiom::A1, pl, t1.left(), Term::alt(s1, s0)), rest);
          Term t3 = step(Axiom::A2, p, t2, Term::alt(s1, Term::alt(s0, rest)));
          cur = replace_at(cur, p, t3);
        }
        std::swap(items[i], items[i + 1]);
        swapped = true;
      }
    }
    const Path root;
    while (cur.right().is(Op::Alt)) {
      const Term& x = cur.left();
      const Term& y = cur.right().left();
      const Term& z = cur.right().right();
      cur = step(Axiom::A2, root, cur, Term::alt(Term::alt(x, y), z));
    }
    return cur;
  }

  const CommFn& f_;
  const HnfOptions& opts_;
  AxiomTrace trace_;
  std::size_t steps_ = 0;
  std::size_t depth_ = 0;
};

bool is_alt(const Term& t) { return t.is(Op::Alt); }

// Instance check of `lhs = rhs` read left to right as printed in the
// axiom table.
bool oriented_instance(Axiom ax, const Term& l, const Term& r, const CommFn& f) {
  using T = Term;
  switch (ax) {
    case Axiom::A1:
      return is_alt(l) && r == T::alt(l.right(), l.left());
    case Axiom::A2:
      return is_alt(l) && is_alt(l.left()) &&
             r == T::alt(l.left().left(), T::alt(l.left().right(), l.right()));
    case Axiom::A3:
      return is_alt(l) && l.left() == l.right() && r == l.left();
    case Axiom::A4:
      return l.is(Op::Seq) && is_alt(l.left()) &&
             r == T::alt(T::seq(l.left().left(), l.right()), T::seq(l.left().right(), l.right()));
    case Axiom::A5:
      return l.is(Op::Seq) && l.left().is(Op::Seq) &&
             r == T::seq(l.left().left(), T::seq(l.left().right(), l.right()));
    case Axiom::A6:
      return is_alt(l) && l.right().is(Op::Inaction) && r == l.left();
    case Axiom::A7:
      return l.is(Op::Seq) && l.left().is(Op::Inaction) && r.is(Op::Inaction);
    case Axiom::D1:
      return l.is(Op::Encap) && is_constant(l.body()) &&
             !(l.body().is(Op::Action) && l.blocked().count(l.body().action_name())) &&
             r == l.body();
    case Axiom::D2:
      return l.is(Op::Encap) && l.body().is(Op::Action) &&
             l.blocked().count(l.body().action_name()) && r.is(Op::Inaction);
    case Axiom::D3:
      return l.is(Op::Encap) && is_alt(l.body()) &&
             r == T::alt(T::encap(l.blocked(), l.body().left()),
                         T::encap(l.blocked(), l.body().right()));
    case Axiom::D4:
      return l.is(Op::Encap) && l.body().is(Op::Seq) &&
             r == T::seq(T::encap(l.blocked(), l.body().left()),
                         T::encap(l.blocked(), l.body().right()));
    case Axiom::CM1:
      return l.is(Op::Par) &&
             r == T::alt(T::alt(T::left_merge(l.left(), l.right()),
                                T::left_merge(l.right(), l.left())),
                         T::comm_merge(l.left(), l.right()));
    case Axiom::CM2:
      return l.is(Op::LeftMerge) && is_constant(l.left()) && r == T::seq(l.left(), l.right());
    case Axiom::CM3:
      return l.is(Op::LeftMerge) && l.left().is(Op::Seq) && is_constant(l.left().left()) &&
             r == T::seq(l.left().left(), T::par(l.left().right(), l.right()));
    case Axiom::CM4:
      return l.is(Op::LeftMerge) && is_alt(l.left()) &&
             r == T::alt(T::left_merge(l.left().left(), l.right()),
                         T::left_merge(l.left().right(), l.right()));
    case Axiom::CM5:
      return l.is(Op::CommMerge) && l.left().is(Op::Seq) && is_constant(l.left().left()) &&
             is_constant(l.right()) &&
             r == T::seq(T::comm_merge(l.left().left(), l.right()), l.left().right());
    case Axiom::CM6:
      return l.is(Op::CommMerge) && is_constant(l.left()) && l.right().is(Op::Seq) &&
             is_constant(l.right().left()) &&
             r == T::seq(T::comm_merge(l.left(), l.right().left()), l.right().right());
    case Axiom::CM7:
      return l.is(Op::CommMerge) && l.left().is(Op::Seq) && l.right().is(Op::Seq) &&
             is_constant(l.left().left()) && is_constant(l.right().left()) &&
             r == T::seq(T::comm_merge(l.left().left(), l.right().left()),
                         T::par(l.left().right(), l.right().right()));
    case Axiom::CM8:
      return l.is(Op::CommMerge) && is_alt(l.left()) &&
             r == T::alt(T::comm_merge(l.left().left(), l.right()),
                         T::comm_merge(l.left().right(), l.right()));
    case Axiom::CM9:
      return l.is(Op::CommMerge) && is_alt(l.right()) &&
             r == T::alt(T::comm_merge(l.left(), l.right().left()),
                         T::comm_merge(l.left(), l.right().right()));
    case Axiom::CF:
      return l.is(Op::CommMerge) && is_constant(l.left()) && is_constant(l.right()) &&
             r == constant_term(f.gamma(constant_value(l.left()), constant_value(l.right())));
    case Axiom::RDP:
      return l.is(Op::Rec) && r == subst_spec(*l.spec().find(l.var_name()), l.spec_ptr());
  }
  return false;
}

}  // namespace

std::string_view axiom_name(Axiom ax) { return kAxiomNames.at(static_cast<std::size_t>(ax)); }

std::optional<Axiom> axiom_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAxiomNames.size(); ++i) {
    if (kAxiomNames[i] == name) return static_cast<Axiom>(i);
  }
  return std::nullopt;
}

std::string render_path(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += static_cast<char>('0' + p[i]);
  }
  return out;
}

const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (auto i : p) cur = &cur->child(i);
  return *cur;
}

namespace {
Term replace_from(const Term& t, const Path& p, std::size_t k, Term replacement) {
  if (k == p.size()) return replacement;
  return t.with_child(p[k], replace_from(t.child(p[k]), p, k + 1, std::move(replacement)));
}
}  // namespace

Term replace_at(const Term& t, const Path& p, Term replacement) {
  return replace_from(t, p, 0, std::move(replacement));
}

HnfResult head_normal_form(const Term& t, const CommFn& f, const HnfOptions& opts) {
  return Normalizer(f, opts).run(t);
}

Term hnf_to_term(const HeadNormalForm& h) {
  std::vector<Term> parts;
  parts.reserve(h.branches.size() + h.terminals.size());
  for (const auto& [a, cont] : h.branches) parts.push_back(Term::seq(Term::action(a), cont));
  for (const auto& b : h.terminals) parts.push_back(Term::action(b));
  return sum(parts);
}

bool is_head_normal_form(const Term& t) {
  switch (t.op()) {
    case Op::Inaction:
    case Op::Action:
      return true;
    case Op::Seq:
      return t.left().is(Op::Action);
    case Op::Alt:
      return is_head_normal_form(t.left()) && is_head_normal_form(t.right());
    default:
      return false;
  }
}

Term replay_trace(const Term& input, const AxiomTrace& trace) {
  Term cur = input;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    if (!(subterm_at(cur, s.path) == s.before)) {
      throw std::logic_error("trace step " + std::to_string(i) + " (" +
                             std::string(axiom_name(s.axiom)) + " @ " + render_path(s.path) +
                             ") does not match the current term");
    }
    cur = replace_at(cur, s.path, s.after);
  }
  return cur;
}

bool is_axiom_instance(const TraceStep& step, const CommFn& f) {
  return oriented_instance(step.axiom, step.before, step.after, f) ||
         oriented_instance(step.axiom, step.after, step.before, f);
}

std::string render_step(const TraceStep& step) {
  std::ostringstream os;
  os << axiom_name(step.axiom) << " @ " << render_path(step.path) << ": " << pretty(step.before)
     << " => " << pretty(step.after);
  return os.str();
}

std::string render_trace(const AxiomTrace& trace) {
  std::string out;
  for (const auto& s : trace) {
    out += render_step(s);
    out += '\n';
  }
  return out;
}

}  // namespace acp
