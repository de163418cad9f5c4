// Variable-free propositional formulas over an arbitrary leaf type. Used for
// ground formulas (leaf = GroundAtom) and time-stamped formulas
// (leaf = TimedAtom).

#ifndef CAUSALPLAN_PROP_FORMULA_H_
#define CAUSALPLAN_PROP_FORMULA_H_

#include <string>
#include <utility>
#include <vector>

namespace causalplan {

template <typename Leaf>
struct PropFormula {
  enum class Kind { kTrue, kFalse, kLeaf, kNot, kAnd, kOr };

  Kind kind = Kind::kTrue;
  Leaf leaf{};
  std::vector<PropFormula> children;

  static PropFormula True() { return PropFormula{}; }
  static PropFormula False() { return PropFormula{Kind::kFalse, Leaf{}, {}}; }
  static PropFormula Constant(bool value) { return value ? True() : False(); }
  static PropFormula Of(Leaf leaf) {
    return PropFormula{Kind::kLeaf, std::move(leaf), {}};
  }

  // The constructors below fold constants and flatten nested connectives of
  // the same kind, so simplified formulas stay simplified.
  static PropFormula Not(PropFormula f) {
    if (f.kind == Kind::kTrue) return False();
    if (f.kind == Kind::kFalse) return True();
    if (f.kind == Kind::kNot) return std::move(f.children.front());
    PropFormula out{Kind::kNot, Leaf{}, {}};
    out.children.push_back(std::move(f));
    return out;
  }

  static PropFormula And(std::vector<PropFormula> parts) {
    return Junction(Kind::kAnd, std::move(parts));
  }
  static PropFormula And(PropFormula a, PropFormula b) {
    std::vector<PropFormula> parts;
    parts.push_back(std::move(a));
    parts.push_back(std::move(b));
    return And(std::move(parts));
  }
  static PropFormula Or(std::vector<PropFormula> parts) {
    return Junction(Kind::kOr, std::move(parts));
  }

  bool IsTrue() const { return kind == Kind::kTrue; }
  bool IsFalse() const { return kind == Kind::kFalse; }

  // `holds(leaf)` decides each leaf.
  template <typename Pred>
  bool Evaluate(const Pred& holds) const {
    switch (kind) {
      case Kind::kTrue:
        return true;
      case Kind::kFalse:
        return false;
      case Kind::kLeaf:
        return holds(leaf);
      case Kind::kNot:
        return !children.front().Evaluate(holds);
      case Kind::kAnd:
        for (const PropFormula& c : children) {
          if (!c.Evaluate(holds)) return false;
        }
        return true;
      case Kind::kOr:
        for (const PropFormula& c : children) {
          if (c.Evaluate(holds)) return true;
        }
        return false;
    }
    return false;
  }

  template <typename Fn>
  void ForEachLeaf(const Fn& fn) const {
    if (kind == Kind::kLeaf) fn(leaf);
    for (const PropFormula& c : children) c.ForEachLeaf(fn);
  }

  // Rebuilds the formula with `fn(leaf)` substituted for each leaf; `fn`
  // returns a PropFormula<OtherLeaf>.
  template <typename Fn>
  auto Map(const Fn& fn) const -> decltype(fn(leaf)) {
    using Out = decltype(fn(leaf));
    switch (kind) {
      case Kind::kTrue:
        return Out::True();
      case Kind::kFalse:
        return Out::False();
      case Kind::kLeaf:
        return fn(leaf);
      case Kind::kNot:
        return Out::Not(children.front().Map(fn));
      case Kind::kAnd:
      case Kind::kOr: {
        std::vector<Out> parts;
        parts.reserve(children.size());
        for (const PropFormula& c : children) parts.push_back(c.Map(fn));
        return kind == Kind::kAnd ? Out::And(std::move(parts))
                                  : Out::Or(std::move(parts));
      }
    }
    return Out::True();
  }

  // Infix text with `~`, `&`, `|`; `label(leaf)` returns a leaf's text.
  template <typename Fn>
  std::string Print(const Fn& label) const {
    std::string out;
    PrintTo(out, label, 0);
    return out;
  }

  friend bool operator==(const PropFormula&, const PropFormula&) = default;

 private:
  template <typename Fn>
  void PrintTo(std::string& out, const Fn& label, int parent_prec) const {
    int prec = 4;
    if (kind == Kind::kOr) prec = 1;
    if (kind == Kind::kAnd) prec = 2;
    if (kind == Kind::kNot) prec = 3;
    const bool parens = prec < parent_prec || (prec == parent_prec && prec < 3);
    if (parens) out += "(";
    switch (kind) {
      case Kind::kTrue:
        out += "true";
        break;
      case Kind::kFalse:
        out += "false";
        break;
      case Kind::kLeaf:
        out += label(leaf);
        break;
      case Kind::kNot:
        out += "~";
        children.front().PrintTo(out, label, 3);
        break;
      case Kind::kAnd:
      case Kind::kOr:
        for (std::size_t i = 0; i < children.size(); ++i) {
          if (i > 0) out += kind == Kind::kAnd ? " & " : " | ";
          children[i].PrintTo(out, label, prec);
        }
        break;
    }
    if (parens) out += ")";
  }

  static PropFormula Junction(Kind kind, std::vector<PropFormula> parts) {
    const Kind absorbing = kind == Kind::kAnd ? Kind::kFalse : Kind::kTrue;
    const Kind neutral = kind == Kind::kAnd ? Kind::kTrue : Kind::kFalse;
    PropFormula out{kind, Leaf{}, {}};
    for (PropFormula& p : parts) {
      if (p.kind == absorbing) return p;
      if (p.kind == neutral) continue;
      if (p.kind == kind) {
        for (PropFormula& c : p.children) out.children.push_back(std::move(c));
      } else {
        out.children.push_back(std::move(p));
      }
    }
    if (out.children.empty()) return PropFormula{neutral, Leaf{}, {}};
    if (out.children.size() == 1) return std::move(out.children.front());
    return out;
  }
};

}  // namespace causalplan

#endif  // CAUSALPLAN_PROP_FORMULA_H_
