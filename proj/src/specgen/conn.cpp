#include "formalign/specgen/conn.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "formalign/props/parser.hpp"
#include "formalign/specgen/text.hpp"

namespace formalign::specgen {

namespace {

const std::vector<std::string> kHeader = {"src_block", "src_signal", "dst_block",
                                          "dst_signal", "condition", "latency"};

// Width of `name` or `name[hi:lo]` in `ts`.
unsigned signal_width(const ir::TransitionSystem& ts, const std::string& text, int row) {
  props::BExprPtr e;
  try {
    e = props::parse_bexpr(text);
  } catch (const props::PropError&) {
    throw SpecError("bad signal '" + text + "'", row);
  }
  if (e->kind != props::BExpr::Kind::Ref) throw SpecError("bad signal '" + text + "'", row);
  auto info = ts.find(e->name);
  if (!info || info->kind == ir::SignalKind::Assumption)
    throw SpecError("unknown signal '" + e->name + "'", row);
  if (!e->range) return info->width;
  if (e->range->first >= info->width)
    throw SpecError("select " + text + " outside the " + std::to_string(info->width) + "-bit signal", row);
  return e->range->first - e->range->second + 1;
}

void check_condition(const ir::TransitionSystem& ts, const std::string& cond, int row) {
  props::BExprPtr e;
  try {
    e = props::parse_bexpr(cond);
  } catch (const props::PropError& err) {
    throw SpecError("bad condition '" + cond + "': " + err.what(), row);
  }
  for (const auto& n : props::references(e)) {
    auto info = ts.find(n);
    if (!info || info->kind == ir::SignalKind::Assumption)
      throw SpecError("unknown signal '" + n + "' in condition", row);
  }
}

}  // namespace

ConnTable parse_conn_csv(std::string_view text) {
  ConnTable t;
  const auto lines = csv_lines(text);
  if (lines.empty() || lines[0].cells != kHeader)
    throw SpecError("expected header src_block,src_signal,dst_block,dst_signal,condition,latency",
                    lines.empty() ? 0 : lines[0].row);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [row, c] = lines[i];
    if (c.size() != kHeader.size()) throw SpecError("expected 6 columns, got " + std::to_string(c.size()), row);
    ConnRow r{c[0], c[1], c[2], c[3], c[4], 0, row};
    if (r.src_signal.empty() || r.dst_signal.empty()) throw SpecError("empty signal name", row);
    if (!c[5].empty()) r.latency = static_cast<unsigned>(parse_number(c[5], row, "latency"));
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string print_conn_csv(const ConnTable& t) {
  std::ostringstream out;
  out << "src_block,src_signal,dst_block,dst_signal,condition,latency\n";
  for (const auto& r : t.rows)
    out << csv_cell(r.src_block) << ',' << csv_cell(r.src_signal) << ',' << csv_cell(r.dst_block) << ','
        << csv_cell(r.dst_signal) << ',' << csv_cell(r.condition) << ',' << r.latency << '\n';
  return out.str();
}

std::string gen_conn_props(const ConnTable& t, const ir::TransitionSystem& ts) {
  std::ostringstream out;
  out << "# connectivity checks\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string name = "conn_" + std::to_string(i + 1);
    const unsigned sw = signal_width(ts, r.src_signal, r.row);
    const unsigned dw = signal_width(ts, r.dst_signal, r.row);
    if (!r.condition.empty()) check_condition(ts, r.condition, r.row);
    if (sw != dw) {
      out << "# FINDING " << name << ": width mismatch " << r.src_block << '.' << r.src_signal << " ("
          << sw << " bits) -> " << r.dst_block << '.' << r.dst_signal << " (" << dw << " bits)\n";
      continue;
    }
    const std::string src =
        r.latency == 0 ? r.src_signal : "$past(" + r.src_signal + ", " + std::to_string(r.latency) + ")";
    out << "prop " << name << " : ";
    if (!r.condition.empty()) out << r.condition << " |-> ";
    out << r.dst_signal << " == " << src << " ;\n";
  }
  return out.str();
}

std::string block_of(const std::string& signal) {
  const auto us = signal.find('_');
  if (us == std::string::npos || us == 0) return "top";
  return signal.substr(0, us);
}

namespace {

struct Piece {
  std::string src;
  unsigned hi = 0, lo = 0;
  unsigned latency = 0;
  std::vector<std::string> conds;

  bool operator<(const Piece& o) const {
    return std::tie(src, hi, lo, latency, conds) < std::tie(o.src, o.hi, o.lo, o.latency, o.conds);
  }
};

class Extractor {
 public:
  Extractor(const ir::TransitionSystem& ts, unsigned max_latency) : ts_(ts), max_latency_(max_latency) {}

  std::vector<Piece> from_definition(const std::string& name, const ir::Expr& def) {
    path_ = {name};
    return collect(def, def->width() - 1, 0, 0, {});
  }

 private:
  std::string at(const std::string& ref, unsigned latency) const {
    return latency == 0 ? ref : "$past(" + ref + ", " + std::to_string(latency) + ")";
  }

  // Operand text for comparisons.
  std::optional<std::string> word(const ir::Expr& e, unsigned latency) const {
    switch (e->op()) {
      case ir::Op::Const: return std::to_string(e->value());
      case ir::Op::Var: return at(e->name(), latency);
      case ir::Op::Slice:
        if (e->arg(0)->op() != ir::Op::Var) return std::nullopt;
        return at(e->arg(0)->name() + select(e->hi(), e->lo()), latency);
      case ir::Op::Zext: return word(e->arg(0), latency);
      default: return std::nullopt;
    }
  }

  std::optional<std::string> boolean(const ir::Expr& e, unsigned latency) const {
    if (e->width() != 1) return std::nullopt;
    switch (e->op()) {
      case ir::Op::Const:
      case ir::Op::Var:
      case ir::Op::Slice: return word(e, latency);
      case ir::Op::Not: {
        auto a = boolean(e->arg(0), latency);
        if (!a) return std::nullopt;
        return "!" + *a;
      }
      case ir::Op::And:
      case ir::Op::Or: {
        auto a = boolean(e->arg(0), latency), b = boolean(e->arg(1), latency);
        if (!a || !b) return std::nullopt;
        return "(" + *a + (e->op() == ir::Op::And ? " && " : " || ") + *b + ")";
      }
      case ir::Op::Eq:
      case ir::Op::Neq: {
        auto a = word(e->arg(0), latency), b = word(e->arg(1), latency);
        if (!a || !b) return std::nullopt;
        return "(" + *a + (e->op() == ir::Op::Eq ? " == " : " != ") + *b + ")";
      }
      case ir::Op::RedOr:
      case ir::Op::RedAnd:
        if (e->arg(0)->width() == 1) return boolean(e->arg(0), latency);
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  std::vector<Piece> source(const std::string& name, unsigned hi, unsigned lo, unsigned latency,
                            const std::vector<std::string>& conds) const {
    return {Piece{name, hi, lo, latency, conds}};
  }

  std::vector<Piece> through(const std::string& name, const ir::Expr& def, unsigned hi, unsigned lo,
                             unsigned latency, const std::vector<std::string>& conds) {
    path_.push_back(name);
    auto out = collect(def, hi, lo, latency, conds);
    path_.pop_back();
    return out;
  }

  std::vector<Piece> collect(const ir::Expr& e, unsigned hi, unsigned lo, unsigned latency,
                             const std::vector<std::string>& conds) {
    switch (e->op()) {
      case ir::Op::Var: {
        const std::string& n = e->name();
        if (std::find(path_.begin(), path_.end(), n) != path_.end()) return {};
        auto info = ts_.find(n);
        switch (info->kind) {
          case ir::SignalKind::Input:
          case ir::SignalKind::Analog:
            return source(n, hi, lo, latency, conds);
          case ir::SignalKind::Wire:
          case ir::SignalKind::Output: {
            const auto& def = info->kind == ir::SignalKind::Wire ? ts_.wires[info->index].expr
                                                                 : ts_.outputs[info->index].expr;
            auto out = through(n, def, hi, lo, latency, conds);
            return out.empty() ? source(n, hi, lo, latency, conds) : out;
          }
          case ir::SignalKind::Register: {
            const auto& r = ts_.registers[info->index];
            if (r.init != 0 || latency + 1 > max_latency_ || !r.next)
              return source(n, hi, lo, latency, conds);
            auto out = through(n, r.next, hi, lo, latency + 1, conds);
            return out.empty() ? source(n, hi, lo, latency, conds) : out;
          }
          case ir::SignalKind::Assumption:
            return {};
        }
        return {};
      }
      case ir::Op::Slice:
        return collect(e->arg(0), e->lo() + hi, e->lo() + lo, latency, conds);
      case ir::Op::Zext:
        if (hi >= e->arg(0)->width()) return {};
        return collect(e->arg(0), hi, lo, latency, conds);
      case ir::Op::Concat: {
        const unsigned wb = e->arg(1)->width();
        if (lo >= wb) return collect(e->arg(0), hi - wb, lo - wb, latency, conds);
        if (hi < wb) return collect(e->arg(1), hi, lo, latency, conds);
        auto a = collect(e->arg(0), hi - wb, 0, latency, conds);
        auto b = collect(e->arg(1), wb - 1, lo, latency, conds);
        if (a.size() != 1 || b.size() != 1) return {};
        if (a[0].src != b[0].src || a[0].latency != b[0].latency || a[0].conds != b[0].conds ||
            a[0].lo != b[0].hi + 1)
          return {};
        Piece p = b[0];
        p.hi = a[0].hi;
        return {p};
      }
      case ir::Op::Mux: {
        const ir::Expr& s = e->arg(0);
        std::string on, off;
        if (s->op() == ir::Op::Var) {
          on = at(s->name(), latency) + " == 1";
          off = at(s->name(), latency) + " == 0";
        } else {
          auto t = boolean(s, latency);
          if (!t) return {};
          on = *t;
          off = "!" + *t;
        }
        auto c1 = conds, c0 = conds;
        c1.push_back(on);
        c0.push_back(off);
        auto out = collect(e->arg(1), hi, lo, latency, c1);
        auto more = collect(e->arg(2), hi, lo, latency, c0);
        out.insert(out.end(), more.begin(), more.end());
        return out;
      }
      default:
        return {};
    }
  }

  const ir::TransitionSystem& ts_;
  unsigned max_latency_;
  std::vector<std::string> path_;
};

}  // namespace

ConnTable extract_connectivity(const ir::TransitionSystem& ts, unsigned max_latency) {
  ConnTable t;
  Extractor x(ts, max_latency);
  auto emit = [&](const ir::Definition& d) {
    std::set<Piece> seen;
    for (auto& p : x.from_definition(d.name, d.expr)) {
      if (!seen.insert(p).second) continue;
      const unsigned w = ts.width_of(p.src);
      ConnRow r;
      r.src_block = block_of(p.src);
      r.src_signal = (p.hi == w - 1 && p.lo == 0) ? p.src : p.src + select(p.hi, p.lo);
      r.dst_block = block_of(d.name);
      r.dst_signal = d.name;
      for (std::size_t i = 0; i < p.conds.size(); ++i) r.condition += (i ? " && " : "") + p.conds[i];
      r.latency = p.latency;
      t.rows.push_back(std::move(r));
    }
  };
  for (const auto& w : ts.wires) emit(w);
  for (const auto& o : ts.outputs) emit(o);
  return t;
}

}  // namespace formalign::specgen
