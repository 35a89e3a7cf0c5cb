#include "nvgrid/dyadic.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "text.hpp"

namespace nvgrid {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

std::size_t subtree_end(const std::vector<int>& code, std::size_t pos) {
    std::size_t pending = 1;
    while (pending > 0) {
        pending += code.at(pos) >= 0 ? 2 : std::size_t(0);
        --pending;
        ++pos;
    }
    return pos;
}

}  // namespace

// ---------------------------------------------------------------- addresses

DyadicAddress::DyadicAddress(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_)
        if (c != '0' && c != '1') throw Error(ErrorKind::Parse, "bad address bit '" + std::string(1, c) + "'");
}

DyadicAddress DyadicAddress::parse(std::string_view text) {
    text = text::trim(text);
    if (text == "_") return DyadicAddress();
    if (text.empty()) throw Error(ErrorKind::Parse, "empty address (write \"_\" for the whole interval)");
    return DyadicAddress(std::string(text));
}

bool DyadicAddress::is_prefix_of(const DyadicAddress& other) const noexcept {
    return starts_with(other.bits_, bits_);
}

DyadicAddress DyadicAddress::child(int bit) const {
    DyadicAddress out = *this;
    out.bits_.push_back(bit ? '1' : '0');
    return out;
}

DyadicAddress DyadicAddress::parent() const {
    DyadicAddress out = *this;
    out.bits_.pop_back();
    return out;
}

int DyadicAddress::last_bit() const { return bits_.back() == '1' ? 1 : 0; }

// ---------------------------------------------------------------- fractions

BinaryFraction::BinaryFraction(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_)
        if (c != '0' && c != '1') throw Error(ErrorKind::Parse, "bad fraction bit");
    while (!bits_.empty() && bits_.back() == '0') bits_.pop_back();
}

BinaryFraction BinaryFraction::parse(std::string_view text) {
    text = text::trim(text);
    if (text.starts_with("0b0.")) return BinaryFraction(std::string(text.substr(4)));
    if (text == "0") return BinaryFraction();
    auto slash = text.find('/');
    if (slash == std::string_view::npos) throw Error(ErrorKind::Parse, "expected p/q, got '" + std::string(text) + "'");
    std::uint64_t p = 0, q = 0;
    auto ps = text.substr(0, slash), qs = text.substr(slash + 1);
    if (std::from_chars(ps.data(), ps.data() + ps.size(), p).ptr != ps.data() + ps.size() ||
        std::from_chars(qs.data(), qs.data() + qs.size(), q).ptr != qs.data() + qs.size() || ps.empty() || qs.empty())
        throw Error(ErrorKind::Parse, "bad fraction '" + std::string(text) + "'");
    if (q == 0 || (q & (q - 1)) != 0) throw Error(ErrorKind::Parse, "denominator must be a power of two");
    if (p >= q) throw Error(ErrorKind::Parse, "coordinate must lie in [0,1)");
    std::size_t k = 0;
    while ((std::uint64_t(1) << k) < q) ++k;
    std::string bits(k, '0');
    for (std::size_t i = 0; i < k; ++i)
        if (p & (std::uint64_t(1) << (k - 1 - i))) bits[i] = '1';
    return BinaryFraction(std::move(bits));
}

std::string BinaryFraction::str() const {
    if (bits_.empty()) return "0";
    if (bits_.size() > 63) return "0b0." + bits_;
    std::uint64_t p = 0;
    for (char c : bits_) p = (p << 1) | std::uint64_t(c == '1');
    return std::to_string(p) + "/" + std::to_string(std::uint64_t(1) << bits_.size());
}

double BinaryFraction::to_double() const {
    double v = 0, scale = 0.5;
    for (char c : bits_) {
        if (c == '1') v += scale;
        scale /= 2;
    }
    return v;
}

DyadicInterval interval_from_address(const DyadicAddress& addr) {
    return DyadicInterval{BinaryFraction(addr.bits()), addr.depth()};
}

// ---------------------------------------------------------------- blocks

std::size_t DyadicBlock::total_depth() const noexcept {
    std::size_t t = 0;
    for (const auto& c : coords) t += c.depth();
    return t;
}

bool DyadicBlock::contains(const DyadicBlock& other) const noexcept {
    for (std::size_t d = 0; d < coords.size(); ++d)
        if (!coords[d].is_prefix_of(other.coords[d])) return false;
    return true;
}

bool DyadicBlock::intersects(const DyadicBlock& other) const noexcept {
    for (std::size_t d = 0; d < coords.size(); ++d)
        if (!coords[d].intersects(other.coords[d])) return false;
    return true;
}

DyadicBlock DyadicBlock::intersection(const DyadicBlock& other) const {
    DyadicBlock out = *this;
    for (std::size_t d = 0; d < coords.size(); ++d)
        if (other.coords[d].depth() > coords[d].depth()) out.coords[d] = other.coords[d];
    return out;
}

DyadicBlock DyadicBlock::child(std::size_t coord, int bit) const {
    DyadicBlock out = *this;
    out.coords[coord] = coords[coord].child(bit);
    return out;
}

DyadicBlock DyadicBlock::parse(std::string_view text) {
    std::vector<DyadicAddress> coords;
    for (auto part : text::split(text::trim(text), ',')) coords.push_back(DyadicAddress::parse(part));
    return DyadicBlock(std::move(coords));
}

std::string DyadicBlock::str() const {
    std::string out;
    for (std::size_t d = 0; d < coords.size(); ++d) {
        if (d) out += ',';
        out += coords[d].str();
    }
    return out;
}

// ---------------------------------------------------------------- patterns

Pattern Pattern::trusted(std::size_t dim, std::vector<DyadicBlock> blocks) {
    std::sort(blocks.begin(), blocks.end());
    Pattern p;
    p.dim_ = dim;
    p.blocks_ = std::move(blocks);
    return p;
}

namespace {

// Blocks of a sorted block list whose coordinate-0 interval meets `addr`.
// Sorting is lexicographic on address tuples, so blocks sharing a
// coordinate-0 address are contiguous and extensions of `addr` form one run.
template <typename Fn>
void for_each_coord0_overlap(const std::vector<DyadicBlock>& sorted, const DyadicAddress& addr, Fn&& fn) {
    auto by_coord0 = [](const DyadicBlock& b, const std::string& s) { return b.coords[0].bits() < s; };
    const std::string& bits = addr.bits();
    for (std::size_t k = 0; k < bits.size(); ++k) {
        std::string prefix = bits.substr(0, k);
        auto it = std::lower_bound(sorted.begin(), sorted.end(), prefix, by_coord0);
        for (; it != sorted.end() && it->coords[0].bits() == prefix; ++it) fn(std::size_t(it - sorted.begin()));
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), bits, by_coord0);
    for (; it != sorted.end() && starts_with(it->coords[0].bits(), bits); ++it) fn(std::size_t(it - sorted.begin()));
}

enum class CutFailure { None, Gap, Overlap, Stuck };

struct Guillotine {
    std::size_t dim;
    std::vector<int> code;
    CutFailure failure = CutFailure::None;

    // Every block in `blocks` lies inside the region whose coordinate depths
    // are `depth`; the region addresses themselves are implied.
    bool run(std::vector<const DyadicBlock*>& blocks, std::vector<std::size_t>& depth) {
        if (blocks.empty()) {
            failure = CutFailure::Gap;
            return false;
        }
        auto equals_region = [&](const DyadicBlock* b) {
            for (std::size_t d = 0; d < dim; ++d)
                if (b->coords[d].depth() != depth[d]) return false;
            return true;
        };
        if (blocks.size() == 1 && equals_region(blocks.front())) {
            code.push_back(-1);
            return true;
        }
        for (std::size_t d = 0; d < dim; ++d) {
            bool free = std::all_of(blocks.begin(), blocks.end(),
                                    [&](const DyadicBlock* b) { return b->coords[d].depth() > depth[d]; });
            if (!free) continue;
            std::vector<const DyadicBlock*> lower, upper;
            for (auto* b : blocks) (b->coords[d].bit(depth[d]) ? upper : lower).push_back(b);
            code.push_back(int(d));
            ++depth[d];
            bool ok = run(lower, depth) && run(upper, depth);
            --depth[d];
            return ok;
        }
        failure = std::any_of(blocks.begin(), blocks.end(), equals_region) ? CutFailure::Overlap : CutFailure::Stuck;
        return false;
    }
};

bool measure_is_one(const std::vector<DyadicBlock>& blocks) {
    std::size_t max_depth = 0;
    for (const auto& b : blocks) max_depth = std::max(max_depth, b.total_depth());
    std::vector<std::uint64_t> count(max_depth + 1, 0);
    for (const auto& b : blocks) ++count[b.total_depth()];
    for (std::size_t k = max_depth; k > 0; --k) {
        if (count[k] % 2 != 0) return false;
        count[k - 1] += count[k] / 2;
    }
    return count[0] == 1;
}

[[noreturn]] void diagnose(std::vector<DyadicBlock>& blocks) {
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for_each_coord0_overlap(blocks, blocks[i].coords[0], [&](std::size_t j) {
            if (j != i && blocks[i].intersects(blocks[j]))
                throw Error(ErrorKind::Overlap, "blocks " + blocks[i].str() + " and " + blocks[j].str() + " intersect");
        });
    }
    if (!measure_is_one(blocks)) throw Error(ErrorKind::Gap, "blocks do not cover the unit cube");
    throw Error(ErrorKind::NotTreeGenerated, "no crossing-free midline cut exists at some step");
}

}  // namespace

std::size_t Pattern::find_containing(const DyadicBlock& cell) const {
    std::size_t found = blocks_.size();
    if (dim_ == 0 || blocks_.empty()) return found;
    for_each_coord0_overlap(blocks_, cell.coords[0], [&](std::size_t j) {
        if (found == blocks_.size() && blocks_[j].contains(cell)) found = j;
    });
    return found;
}

Pattern pattern_validate(std::size_t dim, std::vector<DyadicBlock> blocks) {
    if (dim == 0) throw Error(ErrorKind::DimMismatch, "dimension must be positive");
    for (const auto& b : blocks)
        if (b.dim() != dim)
            throw Error(ErrorKind::DimMismatch,
                        "block " + b.str() + " has dimension " + std::to_string(b.dim()) + ", expected " + std::to_string(dim));
    std::vector<const DyadicBlock*> ptrs;
    for (const auto& b : blocks) ptrs.push_back(&b);
    std::vector<std::size_t> depth(dim, 0);
    Guillotine g{dim, {}};
    if (!g.run(ptrs, depth)) diagnose(blocks);
    return Pattern::trusted(dim, std::move(blocks));
}

ColoredTree canonical_tree(const Pattern& p) {
    std::vector<const DyadicBlock*> ptrs;
    for (const auto& b : p.blocks()) ptrs.push_back(&b);
    std::vector<std::size_t> depth(p.dim(), 0);
    Guillotine g{p.dim(), {}};
    if (!g.run(ptrs, depth)) {
        auto blocks = p.blocks();
        diagnose(blocks);
    }
    return ColoredTree::from_code(std::move(g.code));
}

Refinement common_refinement(const Pattern& p, const Pattern& q) {
    if (p.dim() != q.dim()) throw Error(ErrorKind::DimMismatch, "patterns of different dimension");
    std::vector<std::pair<DyadicBlock, std::pair<std::size_t, std::size_t>>> cells;
    const auto& qb = q.blocks();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        for_each_coord0_overlap(qb, a.coords[0], [&](std::size_t j) {
            if (a.intersects(qb[j])) cells.push_back({a.intersection(qb[j]), {i, j}});
        });
    }
    std::sort(cells.begin(), cells.end());
    Refinement r;
    std::vector<DyadicBlock> blocks;
    blocks.reserve(cells.size());
    for (auto& [cell, origin] : cells) {
        blocks.push_back(std::move(cell));
        r.origin.push_back(origin);
    }
    r.pattern = Pattern::trusted(p.dim(), std::move(blocks));
    return r;
}

std::string format_pattern(const Pattern& p) {
    std::string out = "dim " + std::to_string(p.dim()) + "\n";
    for (const auto& b : p.blocks()) out += b.str() + "\n";
    return out;
}

namespace {

std::size_t parse_dim_line(std::string_view line) {
    auto tok = text::tokens(line);
    std::size_t dim = 0;
    if (tok.size() != 2 || tok[0] != "dim" ||
        std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), dim).ptr != tok[1].data() + tok[1].size() || dim == 0)
        throw Error(ErrorKind::Parse, "expected 'dim <n>' header, got '" + std::string(line) + "'");
    return dim;
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
    auto lines = text::content_lines(text);
    if (lines.empty()) throw Error(ErrorKind::Parse, "empty pattern file");
    std::size_t dim = parse_dim_line(lines.front());
    std::vector<DyadicBlock> blocks;
    for (std::size_t i = 1; i < lines.size(); ++i) blocks.push_back(DyadicBlock::parse(lines[i]));
    return pattern_validate(dim, std::move(blocks));
}

// ---------------------------------------------------------------- trees

ColoredTree ColoredTree::caret(int color, const ColoredTree& lower, const ColoredTree& upper) {
    std::vector<int> code;
    code.reserve(1 + lower.code_.size() + upper.code_.size());
    code.push_back(color);
    code.insert(code.end(), lower.code_.begin(), lower.code_.end());
    code.insert(code.end(), upper.code_.begin(), upper.code_.end());
    return ColoredTree(std::move(code));
}

ColoredTree ColoredTree::from_code(std::vector<int> code) {
    if (code.empty()) throw Error(ErrorKind::Parse, "empty tree code");
    std::size_t pending = 1, i = 0;
    for (; i < code.size() && pending > 0; ++i) {
        if (code[i] < -1) throw Error(ErrorKind::Parse, "bad tree code");
        pending += code[i] >= 0 ? 2 : 0;
        --pending;
    }
    if (pending != 0 || i != code.size()) throw Error(ErrorKind::Parse, "malformed tree code");
    return ColoredTree(std::move(code));
}

ColoredTree ColoredTree::lower() const {
    auto end = subtree_end(code_, 1);
    return ColoredTree(std::vector<int>(code_.begin() + 1, code_.begin() + long(end)));
}

ColoredTree ColoredTree::upper() const {
    auto begin = subtree_end(code_, 1);
    return ColoredTree(std::vector<int>(code_.begin() + long(begin), code_.end()));
}

std::size_t ColoredTree::caret_count() const noexcept {
    return std::size_t(std::count_if(code_.begin(), code_.end(), [](int c) { return c >= 0; }));
}

int ColoredTree::max_color() const noexcept { return *std::max_element(code_.begin(), code_.end()); }

std::vector<DyadicBlock> ColoredTree::leaf_blocks(std::size_t dim) const {
    if (max_color() >= int(dim)) throw Error(ErrorKind::DimMismatch, "tree color exceeds dimension");
    std::vector<DyadicBlock> out;
    std::vector<DyadicBlock> stack{DyadicBlock::whole(dim)};
    // Preorder walk with an explicit stack: upper halves wait below lower ones.
    for (int c : code_) {
        DyadicBlock cur = std::move(stack.back());
        stack.pop_back();
        if (c < 0) {
            out.push_back(std::move(cur));
        } else {
            stack.push_back(cur.child(std::size_t(c), 1));
            stack.push_back(cur.child(std::size_t(c), 0));
        }
    }
    return out;
}

Pattern ColoredTree::pattern(std::size_t dim) const { return Pattern::trusted(dim, leaf_blocks(dim)); }

std::string ColoredTree::str() const {
    std::string out;
    std::vector<int> closers;  // 0 = after lower child emit ',', 1 = after upper emit ')'
    for (int c : code_) {
        if (c < 0) {
            out += '.';
            while (!closers.empty()) {
                int k = closers.back();
                closers.pop_back();
                if (k == 0) {
                    out += ',';
                    closers.push_back(1);
                    break;
                }
                out += ')';
            }
        } else {
            out += std::to_string(c) + "(";
            closers.push_back(0);
        }
    }
    return out;
}

namespace {

ColoredTree parse_tree(std::string_view s, std::size_t& pos) {
    if (pos >= s.size()) throw Error(ErrorKind::Parse, "truncated tree");
    if (s[pos] == '.') {
        ++pos;
        return ColoredTree::leaf();
    }
    int color = 0;
    auto res = std::from_chars(s.data() + pos, s.data() + s.size(), color);
    if (res.ptr == s.data() + pos || color < 0) throw Error(ErrorKind::Parse, "expected caret color");
    pos = std::size_t(res.ptr - s.data());
    auto expect = [&](char c) {
        if (pos >= s.size() || s[pos] != c) throw Error(ErrorKind::Parse, std::string("expected '") + c + "' in tree");
        ++pos;
    };
    expect('(');
    auto lo = parse_tree(s, pos);
    expect(',');
    auto hi = parse_tree(s, pos);
    expect(')');
    return ColoredTree::caret(color, lo, hi);
}

}  // namespace

ColoredTree ColoredTree::parse(std::string_view text) {
    std::string compact;
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n') compact += c;
    std::size_t pos = 0;
    auto t = parse_tree(compact, pos);
    if (pos != compact.size()) throw Error(ErrorKind::Parse, "trailing characters after tree");
    return t;
}

// ---------------------------------------------------------------- coordinate trees

namespace {

bool is_prefix_code_below(const std::vector<DyadicAddress>& leaves, std::size_t lo, std::size_t hi,
                          const DyadicAddress& node) {
    if (hi - lo == 1 && leaves[lo] == node) return true;
    if (hi - lo < 2) return false;
    std::size_t mid = lo;
    while (mid < hi && leaves[mid].depth() > node.depth() && leaves[mid].bit(node.depth()) == 0) ++mid;
    for (std::size_t i = lo; i < hi; ++i)
        if (leaves[i].depth() <= node.depth() || !node.is_prefix_of(leaves[i])) return false;
    return mid > lo && mid < hi && is_prefix_code_below(leaves, lo, mid, node.child(0)) &&
           is_prefix_code_below(leaves, mid, hi, node.child(1));
}

ColoredTree colored_below(const std::vector<DyadicAddress>& leaves, std::size_t lo, std::size_t hi, std::size_t depth,
                          int color) {
    if (hi - lo == 1) return ColoredTree::leaf();
    std::size_t mid = lo;
    while (leaves[mid].bit(depth) == 0) ++mid;
    return ColoredTree::caret(color, colored_below(leaves, lo, mid, depth + 1, color),
                              colored_below(leaves, mid, hi, depth + 1, color));
}

}  // namespace

CoordTree::CoordTree(std::vector<DyadicAddress> leaves) : leaves_(std::move(leaves)) {
    std::sort(leaves_.begin(), leaves_.end());
    if (leaves_.empty() || !is_prefix_code_below(leaves_, 0, leaves_.size(), DyadicAddress()))
        throw Error(ErrorKind::Parse, "coordinate tree leaves must form a complete prefix code");
}

CoordTree CoordTree::from_colored(const ColoredTree& t) {
    if (t.is_leaf()) return CoordTree();
    std::vector<DyadicAddress> leaves;
    for (const auto& b : t.leaf_blocks(std::size_t(t.max_color() + 1))) {
        for (std::size_t d = 0; d + 1 < b.dim(); ++d)
            if (!b[d].empty()) throw Error(ErrorKind::Parse, "tree is not single-colored");
        leaves.push_back(b.coords.back());
    }
    return CoordTree(std::move(leaves));
}

CoordTree CoordTree::spine(std::size_t carets) {
    std::vector<DyadicAddress> leaves;
    for (std::size_t i = 0; i < carets; ++i) leaves.emplace_back(std::string(i, '1') + "0");
    leaves.emplace_back(std::string(carets, '1'));
    return CoordTree(std::move(leaves));
}

ColoredTree CoordTree::to_colored(int color) const { return colored_below(leaves_, 0, leaves_.size(), 0, color); }

std::pair<std::size_t, std::size_t> CoordTree::leaves_under(const DyadicAddress& addr) const {
    auto first = std::lower_bound(leaves_.begin(), leaves_.end(), addr);
    auto last = first;
    while (last != leaves_.end() && addr.is_prefix_of(*last)) ++last;
    return {std::size_t(first - leaves_.begin()), std::size_t(last - leaves_.begin())};
}

std::string CoordTree::str() const {
    std::string out;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (i) out += ' ';
        out += leaves_[i].str();
    }
    return out;
}

CoordTree CoordTree::parse(std::string_view text) {
    std::vector<DyadicAddress> leaves;
    for (auto tok : text::tokens(text)) leaves.push_back(DyadicAddress::parse(tok));
    return CoordTree(std::move(leaves));
}

ProductPattern product_pattern(std::span<const CoordTree> parts) {
    const std::size_t dim = parts.size();
    if (dim == 0) throw Error(ErrorKind::DimMismatch, "product of zero coordinate trees");

    std::vector<DyadicBlock> cells{DyadicBlock::whole(dim)};
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<DyadicBlock> next;
        next.reserve(cells.size() * parts[d].leaf_count());
        for (const auto& c : cells)
            for (const auto& leaf : parts[d].leaves()) {
                DyadicBlock b = c;
                b[d] = leaf;
                next.push_back(std::move(b));
            }
        cells = std::move(next);
    }

    std::vector<int> code{-1};
    for (std::size_t d = dim; d-- > 0;) {
        auto outer = parts[d].to_colored(int(d)).code();
        std::vector<int> composite;
        for (int c : outer) {
            if (c < 0)
                composite.insert(composite.end(), code.begin(), code.end());
            else
                composite.push_back(c);
        }
        code = std::move(composite);
    }
    return ProductPattern{Pattern::trusted(dim, std::move(cells)), ColoredTree::from_code(std::move(code))};
}

}  // namespace nvgrid
