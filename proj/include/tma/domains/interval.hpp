#pragma once

#include "tma/concrete/store.hpp"
#include "tma/integer.hpp"
#include "tma/lang/ast.hpp"

#include <cassert>
#include <compare>
#include <string>
#include <vector>

namespace tma {

/// Integer extended with -oo and +oo.
class Bound {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  Bound(Integer value) : kind_(Kind::Finite), value_(std::move(value)) {}  // NOLINT
  Bound(int value) : Bound(Integer(value)) {}                               // NOLINT

  static Bound neg_inf() { return Bound(Kind::NegInf); }
  static Bound pos_inf() { return Bound(Kind::PosInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  const Integer& value() const {
    assert(is_finite());
    return value_;
  }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_ || !a.is_finite()) {
      return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    }
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Bound operator-() const {
    if (is_neg_inf()) return pos_inf();
    if (is_pos_inf()) return neg_inf();
    return Bound(Integer(-value_));
  }

  /// Undefined for -oo + +oo, which interval arithmetic never forms.
  friend Bound operator+(const Bound& a, const Bound& b) {
    assert(!(a.is_neg_inf() && b.is_pos_inf()) && !(a.is_pos_inf() && b.is_neg_inf()));
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return pos_inf();
    return Bound(Integer(a.value_ + b.value_));
  }

  /// 0 * oo = 0.
  friend Bound operator*(const Bound& a, const Bound& b) {
    if ((a.is_finite() && a.value_ == 0) || (b.is_finite() && b.value_ == 0)) {
      return Bound(0);
    }
    if (a.is_finite() && b.is_finite()) return Bound(Integer(a.value_ * b.value_));
    return (a.sign() * b.sign() > 0) ? pos_inf() : neg_inf();
  }

  std::string str() const {
    if (is_neg_inf()) return "-oo";
    if (is_pos_inf()) return "+oo";
    return value_.str();
  }

 private:
  explicit Bound(Kind kind) : kind_(kind) {}

  int sign() const {
    if (is_neg_inf()) return -1;
    if (is_pos_inf()) return 1;
    return value_.sign();
  }

  Kind kind_;
  Integer value_;
};

/// Integer interval, possibly empty.
class Interval {
 public:
  static Interval bottom() { return Interval(); }
  static Interval top() { return Interval(Bound::neg_inf(), Bound::pos_inf()); }
  static Interval singleton(const Integer& k) { return Interval(k, k); }

  /// [lo, hi], or bottom when it denotes no integer.
  static Interval make(Bound lo, Bound hi) {
    if (lo.is_pos_inf() || hi.is_neg_inf() || hi < lo) return bottom();
    return Interval(std::move(lo), std::move(hi));
  }

  bool is_bottom() const { return empty_; }
  bool is_top() const { return !empty_ && lo_.is_neg_inf() && hi_.is_pos_inf(); }
  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }

  bool contains(const Integer& k) const {
    return !empty_ && lo_ <= Bound(k) && Bound(k) <= hi_;
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  bool leq(const Interval& o) const {
    if (empty_) return true;
    if (o.empty_) return false;
    return o.lo_ <= lo_ && hi_ <= o.hi_;
  }

  Interval join(const Interval& o) const {
    if (empty_) return o;
    if (o.empty_) return *this;
    return Interval(std::min(lo_, o.lo_), std::max(hi_, o.hi_));
  }

  Interval meet(const Interval& o) const {
    if (empty_ || o.empty_) return bottom();
    return make(std::max(lo_, o.lo_), std::min(hi_, o.hi_));
  }

  /// Naive widening: a bound that moved is dropped to infinity.
  Interval widen(const Interval& next) const {
    if (empty_) return next;
    if (next.empty_) return *this;
    Bound lo = next.lo_ >= lo_ ? lo_ : Bound::neg_inf();
    Bound hi = next.hi_ <= hi_ ? hi_ : Bound::pos_inf();
    return Interval(std::move(lo), std::move(hi));
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    if (a.empty_ || b.empty_) return bottom();
    return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    if (a.empty_ || b.empty_) return bottom();
    return Interval(a.lo_ + -b.hi_, a.hi_ + -b.lo_);
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    if (a.empty_ || b.empty_) return bottom();
    Bound c[] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return Interval(std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]}));
  }

  std::string str() const {
    if (empty_) return "⊥";
    if (is_top()) return "⊤";
    return "[" + lo_.str() + "," + hi_.str() + "]";
  }

 private:
  Interval() : empty_(true), lo_(Bound::pos_inf()), hi_(Bound::neg_inf()) {}
  Interval(Bound lo, Bound hi) : empty_(false), lo_(std::move(lo)), hi_(std::move(hi)) {}

  bool empty_;
  Bound lo_;
  Bound hi_;
};

/// Non-relational store of intervals. Read as a set of states it denotes
/// the stores whose every variable lies in its interval, so a single empty
/// interval makes the whole store unreachable. Read as a transition, an
/// empty interval means the variable is not written.
///
/// `values` is either empty (every variable bottom) or has one entry per
/// variable.
struct IntervalStore {
  std::vector<Interval> values;
};

class IntervalDomain {
 public:
  using Store = IntervalStore;

  explicit IntervalDomain(std::vector<std::string> var_names)
      : names_(std::move(var_names)) {}
  explicit IntervalDomain(const VarTable& vars) : IntervalDomain(vars.names()) {}

  std::size_t var_count() const { return names_.size(); }
  const std::vector<std::string>& var_names() const { return names_; }

  Store bottom() const { return {}; }
  Store top() const { return {std::vector<Interval>(names_.size(), Interval::top())}; }
  Store initial() const { return top(); }

  const Interval& get(const Store& s, VarId x) const {
    static const Interval kBottom = Interval::bottom();
    return s.values.empty() ? kBottom : s.values.at(x);
  }

  /// Rebinds one variable; the result is normalized.
  Store set(Store s, VarId x, Interval v) const {
    if (s.values.empty()) s.values.assign(names_.size(), Interval::bottom());
    s.values.at(x) = std::move(v);
    return normalize(std::move(s));
  }

  /// Store with `x` bound to `v` and every other variable bottom.
  Store only(VarId x, Interval v) const { return set(bottom(), x, std::move(v)); }

  /// True when the store, read as states, denotes no store at all.
  bool is_unreachable(const Store& s) const {
    if (s.values.empty()) return true;
    for (const auto& v : s.values) {
      if (v.is_bottom()) return true;
    }
    return false;
  }

  bool equal(const Store& a, const Store& b) const { return leq(a, b) && leq(b, a); }

  bool leq(const Store& a, const Store& b) const {
    for (std::size_t x = 0; x < a.values.size(); ++x) {
      if (!a.values[x].leq(get(b, static_cast<VarId>(x)))) return false;
    }
    return true;
  }

  Store join(const Store& a, const Store& b) const {
    if (a.values.empty()) return b;
    if (b.values.empty()) return a;
    Store out = a;
    for (std::size_t x = 0; x < out.values.size(); ++x) {
      out.values[x] = out.values[x].join(b.values[x]);
    }
    return out;
  }

  Store widen(const Store& a, const Store& b) const {
    if (a.values.empty()) return b;
    if (b.values.empty()) return a;
    Store out = a;
    for (std::size_t x = 0; x < out.values.size(); ++x) {
      out.values[x] = out.values[x].widen(b.values[x]);
    }
    return out;
  }

  Interval eval(const Store& c, const Expr& e) const {
    if (is_unreachable(c)) return Interval::bottom();
    if (auto* k = std::get_if<Const>(&e.node)) return Interval::singleton(k->value);
    if (auto* v = std::get_if<VarRef>(&e.node)) return c.values.at(v->var);
    if (std::holds_alternative<NondetExpr>(e.node)) return Interval::top();
    const auto& b = std::get<Binary>(e.node);
    Interval l = eval(c, *b.lhs);
    Interval r = eval(c, *b.rhs);
    switch (b.op) {
      case BinaryOp::Add: return l + r;
      case BinaryOp::Sub: return l - r;
      case BinaryOp::Mul: return l * r;
    }
    return Interval::top();
  }

  Store assign(const Store& c, const Assign& a) const {
    if (is_unreachable(c)) return bottom();
    return set(c, a.var, eval(c, *a.value));
  }

  /// What the assignment can write: the new value of the assigned variable,
  /// bottom elsewhere.
  Store interference(const Store& c, const Assign& a) const {
    if (is_unreachable(c)) return bottom();
    return only(a.var, eval(c, *a.value));
  }

  Store apply_interference(const Store& i, const Store& c) const {
    if (is_unreachable(c)) return bottom();
    return join(i, c);
  }

  /// Refines the store by a condition. `!=` and `?` give no information.
  Store enforce(const Store& c, const Cond& cond) const {
    if (is_unreachable(c)) return bottom();
    if (auto* cmp = std::get_if<Compare>(&cond.node)) return enforce_compare(c, *cmp);
    if (auto* n = std::get_if<Not>(&cond.node)) return enforce(c, *negate(*n->inner));
    if (auto* a = std::get_if<And>(&cond.node)) return enforce(enforce(c, *a->lhs), *a->rhs);
    if (auto* o = std::get_if<Or>(&cond.node)) {
      return join(enforce(c, *o->lhs), enforce(c, *o->rhs));
    }
    return c;
  }

  bool contains(const Store& c, const ConcreteStore& m) const {
    if (is_unreachable(c)) return false;
    for (std::size_t x = 0; x < c.values.size(); ++x) {
      if (!c.values[x].contains(m.values.at(x))) return false;
    }
    return true;
  }

  /// `x=[0,3], y=⊤`; bottom entries are shown too.
  std::string render(const Store& s) const {
    std::string out;
    for (std::size_t x = 0; x < names_.size(); ++x) {
      if (x) out += ", ";
      out += names_[x] + "=" + get(s, static_cast<VarId>(x)).str();
    }
    return out;
  }

 private:
  Store normalize(Store s) const {
    for (const auto& v : s.values) {
      if (!v.is_bottom()) return s;
    }
    return bottom();
  }

  /// Values `x` may take given `x op other` with `other` in `r`.
  static Interval constraint(CompareOp op, const Interval& r) {
    if (r.is_bottom()) return Interval::bottom();
    switch (op) {
      case CompareOp::Lt: return Interval::make(Bound::neg_inf(), r.hi() + Bound(-1));
      case CompareOp::Le: return Interval::make(Bound::neg_inf(), r.hi());
      case CompareOp::Eq: return r;
      case CompareOp::Ne: return Interval::top();
      case CompareOp::Ge: return Interval::make(r.lo(), Bound::pos_inf());
      case CompareOp::Gt: return Interval::make(r.lo() + Bound(1), Bound::pos_inf());
    }
    return Interval::top();
  }

  static CompareOp mirror(CompareOp op) {
    switch (op) {
      case CompareOp::Lt: return CompareOp::Gt;
      case CompareOp::Le: return CompareOp::Ge;
      case CompareOp::Ge: return CompareOp::Le;
      case CompareOp::Gt: return CompareOp::Lt;
      default: return op;
    }
  }

  static bool definitely_false(CompareOp op, const Interval& l, const Interval& r) {
    if (l.is_bottom() || r.is_bottom()) return true;
    switch (op) {
      case CompareOp::Lt: return l.lo() >= r.hi();
      case CompareOp::Le: return l.lo() > r.hi();
      case CompareOp::Eq: return l.meet(r).is_bottom();
      case CompareOp::Ne: return false;
      case CompareOp::Ge: return l.hi() < r.lo();
      case CompareOp::Gt: return l.hi() <= r.lo();
    }
    return false;
  }

  Store enforce_compare(const Store& c, const Compare& cmp) const {
    if (cmp.op == CompareOp::Ne) return c;
    Interval l = eval(c, *cmp.lhs);
    Interval r = eval(c, *cmp.rhs);
    if (definitely_false(cmp.op, l, r)) return bottom();
    Store out = c;
    if (auto* v = std::get_if<VarRef>(&cmp.lhs->node)) {
      out.values[v->var] = out.values[v->var].meet(constraint(cmp.op, r));
    }
    if (auto* v = std::get_if<VarRef>(&cmp.rhs->node)) {
      out.values[v->var] = out.values[v->var].meet(constraint(mirror(cmp.op), l));
    }
    return is_unreachable(out) ? bottom() : out;
  }

  std::vector<std::string> names_;
};

}  // namespace tma
