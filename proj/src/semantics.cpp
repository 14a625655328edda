#include "relic/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <mutex>

namespace relic {

bool Rel::at(std::size_t a, std::size_t b) const {
    std::size_t i = a * n_ + b;
    return (bits_[i / 64] >> (i % 64)) & 1;
}

void Rel::set(std::size_t a, std::size_t b, bool value) {
    std::size_t i = a * n_ + b;
    if (value)
        bits_[i / 64] |= std::uint64_t{1} << (i % 64);
    else
        bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

Rel Rel::full(std::size_t n) {
    Rel r(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) r.set(a, b);
    return r;
}

Rel Rel::identity(std::size_t n) {
    Rel r(n);
    for (std::size_t a = 0; a < n; ++a) r.set(a, a);
    return r;
}

Rel Rel::diversity(std::size_t n) { return identity(n).complement(); }

Rel Rel::complement() const {
    Rel r(n_);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) r.set(a, b, !at(a, b));
    return r;
}

Rel Rel::converse() const {
    Rel r(n_);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (at(a, b)) r.set(b, a);
    return r;
}

Rel Rel::meet(const Rel& o) const {
    Rel r(n_);
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] & o.bits_[i];
    return r;
}

Rel Rel::join(const Rel& o) const {
    Rel r(n_);
    for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] | o.bits_[i];
    return r;
}

Rel Rel::compose(const Rel& o) const {
    Rel r(n_);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t c = 0; c < n_; ++c)
            if (at(a, c))
                for (std::size_t b = 0; b < n_; ++b)
                    if (o.at(c, b)) r.set(a, b);
    return r;
}

Rel Rel::rel_sum(const Rel& o) const {
    // (a,b) in L!K iff for every c, (a,c) in L or (c,b) in K.
    Rel r(n_);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
            bool all = true;
            for (std::size_t c = 0; c < n_; ++c)
                if (!at(a, c) && !o.at(c, b)) { all = false; break; }
            r.set(a, b, all);
        }
    return r;
}

bool Rel::subset_of(const Rel& o) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~o.bits_[i]) return false;
    return true;
}

bool Rel::is_empty() const {
    for (std::uint64_t w : bits_)
        if (w) return false;
    return true;
}

std::size_t Rel::count() const {
    std::size_t total = 0;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (at(a, b)) ++total;
    return total;
}

std::optional<std::pair<std::size_t, std::size_t>> Rel::first_not_in(const Rel& o) const {
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (at(a, b) && !o.at(a, b)) return std::make_pair(a, b);
    return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (at(a, b)) out.emplace_back(a, b);
    return out;
}

namespace {

struct EvalCtx {
    const Model& m;
    std::map<const void*, Rel> memo;
};

Rel eval(EvalCtx& ctx, const Label& l);
Rel extension(EvalCtx& ctx, const Slice& s);

Rel eval(EvalCtx& ctx, const Label& l) {
    const Model& m = ctx.m;
    switch (l.kind()) {
        case LabelKind::Name: {
            const Rel* r = m.find(l.name());
            return r ? *r : Rel::empty(m.size);
        }
        case LabelKind::Bottom: return Rel::empty(m.size);
        case LabelKind::Top: return Rel::full(m.size);
        case LabelKind::Id: return Rel::identity(m.size);
        case LabelKind::Di: return Rel::diversity(m.size);
        case LabelKind::Compl: return eval(ctx, l.child()).complement();
        case LabelKind::Conv: return eval(ctx, l.child()).converse();
        case LabelKind::Meet: return eval(ctx, l.lhs()).meet(eval(ctx, l.rhs()));
        case LabelKind::Join: return eval(ctx, l.lhs()).join(eval(ctx, l.rhs()));
        case LabelKind::RelProd: return eval(ctx, l.lhs()).compose(eval(ctx, l.rhs()));
        case LabelKind::RelSum: return eval(ctx, l.lhs()).rel_sum(eval(ctx, l.rhs()));
        case LabelKind::SliceLit: {
            const void* k = l.slice_ptr().get();
            auto it = ctx.memo.find(k);
            if (it != ctx.memo.end()) return it->second;
            Rel r = extension(ctx, l.slice());
            ctx.memo.emplace(k, r);
            return r;
        }
        case LabelKind::GraphLit: {
            Rel r = Rel::empty(m.size);
            for (const Slice& s : l.graph().slices()) r = r.join(extension(ctx, s));
            return r;
        }
    }
    throw Error("eval: bad label");
}

Rel extension(EvalCtx& ctx, const Slice& s) {
    const std::size_t n = ctx.m.size;
    const auto& nodes = s.draft().nodes();
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;

    std::vector<Rel> arc_rel;
    for (const Arc& a : s.draft().arcs()) arc_rel.push_back(eval(ctx, a.label));

    // Arcs become checkable once both endpoints are assigned.
    std::vector<std::vector<std::size_t>> ready(nodes.size());
    for (std::size_t ai = 0; ai < s.draft().arcs().size(); ++ai) {
        const Arc& a = s.draft().arcs()[ai];
        ready[std::max(pos[a.src], pos[a.dst])].push_back(ai);
    }

    Rel out(n);
    std::vector<std::size_t> val(nodes.size(), 0);
    std::size_t in_pos = pos[s.input()], out_pos = pos[s.output()];

    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == nodes.size()) {
            out.set(val[in_pos], val[out_pos]);
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            val[i] = v;
            bool ok = true;
            for (std::size_t ai : ready[i]) {
                const Arc& a = s.draft().arcs()[ai];
                if (!arc_rel[ai].at(val[pos[a.src]], val[pos[a.dst]])) { ok = false; break; }
            }
            if (ok) go(i + 1);
        }
    };
    if (n > 0) go(0);
    return out;
}

}  // namespace

Rel eval_label(const Model& m, const Label& l) {
    EvalCtx ctx{m, {}};
    return eval(ctx, l);
}

Rel slice_extension(const Model& m, const Slice& s) {
    EvalCtx ctx{m, {}};
    return extension(ctx, s);
}

Rel graph_extension(const Model& m, const Graph& g) {
    EvalCtx ctx{m, {}};
    Rel out = Rel::empty(m.size);
    for (const Slice& s : g.slices()) out = out.join(extension(ctx, s));
    return out;
}

bool satisfies(const Model& m, const Assignment& gamma, const Draft& d) {
    EvalCtx ctx{m, {}};
    for (const Arc& a : d.arcs()) {
        auto su = gamma.find(a.src), sv = gamma.find(a.dst);
        if (su == gamma.end() || sv == gamma.end()) return false;
        if (!eval(ctx, a.label).at(su->second, sv->second)) return false;
    }
    return true;
}

bool holds(const Model& m, const LabelInclusion& inc) {
    EvalCtx ctx{m, {}};
    return eval(ctx, inc.lhs).subset_of(eval(ctx, inc.rhs));
}

bool holds(const Model& m, const Inclusion& inc) {
    return holds(m, LabelInclusion{term_to_label(inc.lhs), term_to_label(inc.rhs)});
}

Model natural_model(const Draft& d) {
    std::map<NodeId, std::size_t> ignore;
    return natural_model(d, ignore);
}

Model natural_model(const Draft& d, std::map<NodeId, std::size_t>& node_index) {
    node_index.clear();
    for (NodeId n : d.nodes()) node_index.emplace(n, node_index.size());
    Model m;
    m.size = node_index.size();
    for (const Arc& a : d.arcs()) {
        if (a.label.kind() != LabelKind::Name) continue;
        auto [it, _] = m.interp.emplace(a.label.name(), Rel(m.size));
        it->second.set(node_index[a.src], node_index[a.dst]);
    }
    return m;
}

void collect_names_into(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Name: out.insert(t.name()); break;
        case TermKind::Compl:
        case TermKind::Conv: collect_names_into(t.child(), out); break;
        case TermKind::Meet:
        case TermKind::Join:
        case TermKind::RelProd:
        case TermKind::RelSum:
            collect_names_into(t.lhs(), out);
            collect_names_into(t.rhs(), out);
            break;
        default: break;
    }
}

static void collect_names_into(const Label& l, std::set<std::string>& out) {
    switch (l.kind()) {
        case LabelKind::Name: out.insert(l.name()); break;
        case LabelKind::Compl:
        case LabelKind::Conv: collect_names_into(l.child(), out); break;
        case LabelKind::Meet:
        case LabelKind::Join:
        case LabelKind::RelProd:
        case LabelKind::RelSum:
            collect_names_into(l.lhs(), out);
            collect_names_into(l.rhs(), out);
            break;
        case LabelKind::SliceLit:
            for (const Arc& a : l.slice().draft().arcs()) collect_names_into(a.label, out);
            break;
        case LabelKind::GraphLit:
            for (const Slice& s : l.graph().slices())
                for (const Arc& a : s.draft().arcs()) collect_names_into(a.label, out);
            break;
        default: break;
    }
}

std::vector<std::string> collect_names(const Term& t) {
    std::set<std::string> s;
    collect_names_into(t, s);
    return {s.begin(), s.end()};
}

std::vector<std::string> collect_names(const Label& l) {
    std::set<std::string> s;
    collect_names_into(l, s);
    return {s.begin(), s.end()};
}

std::vector<std::string> collect_names(const Inclusion& inc, const std::vector<Inclusion>& hyps) {
    std::set<std::string> s;
    collect_names_into(inc.lhs, s);
    collect_names_into(inc.rhs, s);
    for (const Inclusion& h : hyps) {
        collect_names_into(h.lhs, s);
        collect_names_into(h.rhs, s);
    }
    return {s.begin(), s.end()};
}

namespace {

// Compiled term evaluation over single-word relation masks (carrier <= 5).
// Used only by the exhaustive oracle, where allocation per model would hurt.
using Mask = std::uint32_t;

struct Prog {
    enum Op : std::uint8_t { PushName, PushBot, PushTop, PushId, PushDi, Neg, Cnv, And, Or, Comp, Sum };
    struct Ins {
        Op op;
        std::uint8_t name_index;
    };
    std::vector<Ins> code;
    std::size_t stack_need = 0;
};

void compile(const Term& t, const std::vector<std::string>& names, Prog& p) {
    switch (t.kind()) {
        case TermKind::Name: {
            auto it = std::find(names.begin(), names.end(), t.name());
            p.code.push_back({Prog::PushName, static_cast<std::uint8_t>(it - names.begin())});
            break;
        }
        case TermKind::Bottom: p.code.push_back({Prog::PushBot, 0}); break;
        case TermKind::Top: p.code.push_back({Prog::PushTop, 0}); break;
        case TermKind::Id: p.code.push_back({Prog::PushId, 0}); break;
        case TermKind::Di: p.code.push_back({Prog::PushDi, 0}); break;
        case TermKind::Compl: compile(t.child(), names, p); p.code.push_back({Prog::Neg, 0}); break;
        case TermKind::Conv: compile(t.child(), names, p); p.code.push_back({Prog::Cnv, 0}); break;
        case TermKind::Meet:
            compile(t.lhs(), names, p); compile(t.rhs(), names, p);
            p.code.push_back({Prog::And, 0});
            break;
        case TermKind::Join:
            compile(t.lhs(), names, p); compile(t.rhs(), names, p);
            p.code.push_back({Prog::Or, 0});
            break;
        case TermKind::RelProd:
            compile(t.lhs(), names, p); compile(t.rhs(), names, p);
            p.code.push_back({Prog::Comp, 0});
            break;
        case TermKind::RelSum:
            compile(t.lhs(), names, p); compile(t.rhs(), names, p);
            p.code.push_back({Prog::Sum, 0});
            break;
    }
}

// Lookup tables for small carriers: composition and converse indexed by the
// relation bitmask, plus the bitmask action of every carrier permutation
// (used to skip isomorphic models during exhaustive scans).
struct OpTables {
    std::vector<std::uint16_t> comp;             // comp[l << bits | r]
    std::vector<std::uint16_t> cnv;              // cnv[r]
    std::vector<std::vector<std::uint16_t>> perms;  // non-identity permutations
    unsigned bits = 0;
};

const OpTables* tables_for(std::size_t n) {
    if (n > 3) return nullptr;
    static OpTables cache[4];
    static std::once_flag once[4];
    std::call_once(once[n], [n] {
        OpTables& t = cache[n];
        const unsigned per = static_cast<unsigned>(n * n);
        const std::size_t count = std::size_t{1} << per;
        t.bits = per;
        auto raw_comp = [n](Mask l, Mask r) {
            Mask out = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t c = 0; c < n; ++c)
                    if (l & (Mask{1} << (a * n + c)))
                        for (std::size_t b = 0; b < n; ++b)
                            if (r & (Mask{1} << (c * n + b))) out |= Mask{1} << (a * n + b);
            return out;
        };
        t.comp.resize(count * count);
        for (std::size_t l = 0; l < count; ++l)
            for (std::size_t r = 0; r < count; ++r)
                t.comp[(l << per) | r] =
                    static_cast<std::uint16_t>(raw_comp(static_cast<Mask>(l), static_cast<Mask>(r)));
        t.cnv.resize(count);
        for (std::size_t r = 0; r < count; ++r) {
            Mask out = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (r & (std::size_t{1} << (a * n + b))) out |= Mask{1} << (b * n + a);
            t.cnv[r] = static_cast<std::uint16_t>(out);
        }
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        while (std::next_permutation(perm.begin(), perm.end())) {
            std::vector<std::uint16_t> table(count);
            for (std::size_t r = 0; r < count; ++r) {
                Mask out = 0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        if (r & (std::size_t{1} << (a * n + b)))
                            out |= Mask{1} << (perm[a] * n + perm[b]);
                table[r] = static_cast<std::uint16_t>(out);
            }
            t.perms.push_back(std::move(table));
        }
    });
    return &cache[n];
}

struct MaskOps {
    std::size_t n;
    Mask universe, ident;
    Mask row_mask;  // low n bits
    const OpTables* tables;

    explicit MaskOps(std::size_t carrier) : n(carrier), tables(tables_for(carrier)) {
        universe = (n * n >= 32) ? 0xffffffffu : ((Mask{1} << (n * n)) - 1);
        ident = 0;
        for (std::size_t a = 0; a < n; ++a) ident |= Mask{1} << (a * n + a);
        row_mask = (Mask{1} << n) - 1;
    }

    Mask row(Mask r, std::size_t a) const { return (r >> (a * n)) & row_mask; }

    Mask comp(Mask l, Mask r) const {
        if (tables) return tables->comp[(static_cast<std::size_t>(l) << tables->bits) | r];
        Mask out = 0;
        for (std::size_t a = 0; a < n; ++a) {
            Mask lr = row(l, a), acc = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (lr & (Mask{1} << c)) acc |= row(r, c);
            out |= acc << (a * n);
        }
        return out;
    }

    Mask cnv(Mask r) const {
        if (tables) return tables->cnv[r];
        Mask out = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (r & (Mask{1} << (a * n + b))) out |= Mask{1} << (b * n + a);
        return out;
    }

    // L!K = ~(~L;~K)
    Mask sum(Mask l, Mask r) const {
        return universe & ~comp(universe & ~l, universe & ~r);
    }

    // Lexicographically least among the carrier-permuted variants?
    bool canonical_model(const Mask* cur, std::size_t k) const {
        if (!tables) return true;
        for (const auto& table : tables->perms) {
            for (std::size_t i = 0; i < k; ++i) {
                Mask p = table[cur[i]];
                if (p < cur[i]) return false;
                if (p > cur[i]) break;
            }
        }
        return true;
    }
};

Mask run(const Prog& p, const MaskOps& ops, const Mask* names, Mask* stack) {
    std::size_t sp = 0;
    for (const Prog::Ins& ins : p.code) {
        switch (ins.op) {
            case Prog::PushName: stack[sp++] = names[ins.name_index]; break;
            case Prog::PushBot: stack[sp++] = 0; break;
            case Prog::PushTop: stack[sp++] = ops.universe; break;
            case Prog::PushId: stack[sp++] = ops.ident; break;
            case Prog::PushDi: stack[sp++] = ops.universe & ~ops.ident; break;
            case Prog::Neg: stack[sp - 1] = ops.universe & ~stack[sp - 1]; break;
            case Prog::Cnv: stack[sp - 1] = ops.cnv(stack[sp - 1]); break;
            case Prog::And: --sp; stack[sp - 1] &= stack[sp]; break;
            case Prog::Or: --sp; stack[sp - 1] |= stack[sp]; break;
            case Prog::Comp: --sp; stack[sp - 1] = ops.comp(stack[sp - 1], stack[sp]); break;
            case Prog::Sum: --sp; stack[sp - 1] = ops.sum(stack[sp - 1], stack[sp]); break;
        }
    }
    return stack[sp - 1];
}

std::size_t stack_need(const Prog& p) {
    std::size_t depth = 0, max_depth = 0;
    for (const Prog::Ins& ins : p.code) {
        switch (ins.op) {
            case Prog::PushName:
            case Prog::PushBot:
            case Prog::PushTop:
            case Prog::PushId:
            case Prog::PushDi: ++depth; break;
            case Prog::And:
            case Prog::Or:
            case Prog::Comp:
            case Prog::Sum: --depth; break;
            default: break;
        }
        max_depth = std::max(max_depth, depth);
    }
    return max_depth;
}

Model model_from_masks(std::size_t n, const std::vector<std::string>& names,
                       const std::vector<Mask>& masks) {
    Model m;
    m.size = n;
    for (std::size_t i = 0; i < names.size(); ++i) {
        Rel r(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (masks[i] & (Mask{1} << (a * n + b))) r.set(a, b);
        m.interp.emplace(names[i], r);
    }
    return m;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const Inclusion& inc,
                                              const std::vector<Inclusion>& hyps,
                                              std::size_t max_size,
                                              const OracleOptions& opts) {
    if (max_size < 1) throw Error("find_countermodel: max_size must be >= 1");
    std::vector<std::string> names = collect_names(inc, hyps);
    {
        std::uint64_t bits = static_cast<std::uint64_t>(names.size()) * max_size * max_size;
        if (bits > opts.bit_budget) {
            std::ostringstream msg;
            msg << "countermodel search space is 2^" << bits << " interpretations (budget 2^"
                << opts.bit_budget << ")";
            throw BudgetExceeded(msg.str(), bits);
        }
    }

    Prog goal_l, goal_r;
    std::vector<std::pair<Prog, Prog>> hyp_progs;
    compile(inc.lhs, names, goal_l);
    compile(inc.rhs, names, goal_r);
    for (const Inclusion& h : hyps) {
        std::pair<Prog, Prog> p;
        compile(h.lhs, names, p.first);
        compile(h.rhs, names, p.second);
        hyp_progs.push_back(std::move(p));
    }
    std::size_t stack_size = 1;
    for (const Prog* p : {&goal_l, &goal_r})
        stack_size = std::max(stack_size, stack_need(*p));
    for (auto& [a, b] : hyp_progs)
        stack_size = std::max({stack_size, stack_need(a), stack_need(b)});

    const std::size_t k = names.size();
    for (std::size_t n = 1; n <= max_size; ++n) {
        MaskOps ops(n);
        const unsigned per = static_cast<unsigned>(n * n);
        const std::uint64_t total = k == 0 ? 1 : (std::uint64_t{1} << (per * k));

        // Big-endian split: the first name occupies the most significant
        // field, so ascending codes enumerate interpretation vectors
        // lexicographically.
        auto decode = [&](std::uint64_t code, std::vector<Mask>& cur) {
            for (std::size_t i = k; i-- > 0;) {
                cur[i] = static_cast<Mask>(code & ((std::uint64_t{1} << per) - 1));
                code >>= per;
            }
        };
        auto scan = [&](std::uint64_t from, std::uint64_t to,
                        const std::atomic<unsigned>* cutoff, unsigned chunk_id,
                        bool canonical_only) -> std::optional<std::uint64_t> {
            std::vector<Mask> cur(k);
            std::vector<Mask> stack(stack_size + 1);
            for (std::uint64_t code = from; code < to; ++code) {
                if (cutoff && (code & 0xfff) == 0 &&
                    cutoff->load(std::memory_order_relaxed) < chunk_id)
                    return std::nullopt;  // an earlier chunk already has a hit
                decode(code, cur);
                if (canonical_only && !ops.canonical_model(cur.data(), k)) continue;
                bool hyps_ok = true;
                for (auto& [hl, hr] : hyp_progs) {
                    Mask l = run(hl, ops, cur.data(), stack.data());
                    Mask r = run(hr, ops, cur.data(), stack.data());
                    if (l & ~r) { hyps_ok = false; break; }
                }
                if (!hyps_ok) continue;
                Mask l = run(goal_l, ops, cur.data(), stack.data());
                Mask r = run(goal_r, ops, cur.data(), stack.data());
                if (l & ~r & ops.universe) return code;
            }
            return std::nullopt;
        };

        unsigned threads = opts.threads ? opts.threads
                                        : std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
        auto scan_range = [&](std::uint64_t to, bool canonical_only)
            -> std::optional<std::uint64_t> {
            if (to < 0x10000 || threads <= 1) return scan(0, to, nullptr, 0, canonical_only);
            std::uint64_t chunk = (to + threads - 1) / threads;
            std::vector<std::optional<std::uint64_t>> results(threads);
            std::atomic<unsigned> found_chunk{threads};
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    std::uint64_t from = t * chunk;
                    std::uint64_t end = std::min(to, from + chunk);
                    auto r = scan(from, end, &found_chunk, t, canonical_only);
                    results[t] = r;
                    if (r) {
                        unsigned expect = found_chunk.load();
                        while (t < expect && !found_chunk.compare_exchange_weak(expect, t)) {}
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (unsigned t = 0; t < threads; ++t)
                if (results[t]) return results[t];
            return std::nullopt;
        };

        std::optional<std::uint64_t> found;
        // Large spaces: first scan only canonical representatives (one model
        // per isomorphism class); on a hit, rescan the prefix exactly so the
        // reported model is still the lexicographically first one.
        bool use_sym = ops.tables && !ops.tables->perms.empty() &&
                       total > (std::uint64_t{1} << 20);
        if (use_sym) {
            auto hit = scan_range(total, true);
            if (hit) found = scan_range(*hit + 1, false);
        } else {
            found = scan_range(total, false);
        }

        if (found) {
            std::vector<Mask> cur(k);
            decode(*found, cur);
            Model m = model_from_masks(n, names, cur);
            Rel l = eval_label(m, term_to_label(inc.lhs));
            Rel r = eval_label(m, term_to_label(inc.rhs));
            auto w = l.first_not_in(r);
            assert(w);
            return Countermodel{std::move(m), *w};
        }
    }
    return std::nullopt;
}

std::string model_to_text(const Model& m) {
    std::ostringstream out;
    out << "size " << m.size << "\n";
    for (const auto& [name, rel] : m.interp) {
        out << name << ":";
        for (auto [a, b] : rel.pairs()) out << " (" << a << "," << b << ")";
        out << "\n";
    }
    return out.str();
}

Model model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Model m;
    bool have_size = false;
    std::size_t lineno = 0;
    auto err = [&](const std::string& what) -> Error {
        return Error("model format error at line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::istringstream ls(line);
        if (!have_size) {
            std::string word;
            ls >> word;
            if (word != "size") throw err("expected 'size N'");
            if (!(ls >> m.size) || m.size == 0) throw err("bad carrier size");
            have_size = true;
            continue;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) throw err("expected 'name: (a,b) ...'");
        std::string name = line.substr(first, colon - first);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
        if (name.empty()) throw err("empty relation name");
        Rel rel(m.size);
        std::istringstream ps(line.substr(colon + 1));
        std::string tok;
        while (ps >> tok) {
            std::size_t a, b;
            char l, c, r;
            std::istringstream ts(tok);
            if (!(ts >> l >> a >> c >> b >> r) || l != '(' || c != ',' || r != ')')
                throw err("bad pair '" + tok + "'");
            if (a >= m.size || b >= m.size) throw err("pair out of carrier range");
            rel.set(a, b);
        }
        m.interp[name] = rel;
    }
    if (!have_size) throw Error("model format error: missing 'size N' line");
    return m;
}

}  // namespace relic
