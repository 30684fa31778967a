#include "troptree/newick.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

#include "troptree/error.hpp"

namespace troptree {

namespace {

struct Node {
    std::string label;
    double length = 0.0;
    bool has_length = false;
    std::size_t offset = 0;
    std::vector<std::size_t> children;
};

class NewickReader {
public:
    explicit NewickReader(std::string_view text) : text_(text) {}

    std::size_t parse_tree() {
        const std::size_t root = parse_subtree();
        skip_space();
        if (peek() != ';') fail("expected ';'");
        ++pos_;
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters after ';'");
        return root;
    }

    std::vector<Node>& nodes() { return nodes_; }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '[') {
                const auto close = text_.find(']', pos_);
                if (close == std::string_view::npos) fail("unterminated comment");
                pos_ = close + 1;
            } else {
                break;
            }
        }
    }

    static bool is_label_char(char c) {
        switch (c) {
            case '(': case ')': case '[': case ']': case '\'': case ':': case ';': case ',':
            case ' ': case '\t': case '\n': case '\r': case '\0':
                return false;
            default:
                return true;
        }
    }

    std::string parse_label() {
        skip_space();
        std::string label;
        if (peek() == '\'') {
            ++pos_;
            while (true) {
                if (pos_ >= text_.size()) fail("unterminated quoted label");
                const char c = text_[pos_++];
                if (c == '\'') {
                    if (peek() != '\'') break;
                    ++pos_;
                }
                label.push_back(c);
            }
            return label;
        }
        while (is_label_char(peek())) label.push_back(text_[pos_++]);
        return label;
    }

    void parse_length(Node& node) {
        skip_space();
        if (peek() != ':') return;
        ++pos_;
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::string_view("0123456789.eE+-").find(text_[pos_]) != std::string_view::npos) {
            ++pos_;
        }
        const std::string token(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double value = token.empty() ? 0.0 : std::strtod(token.c_str(), &end);
        if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed branch length");
        }
        if (value < 0.0) {
            pos_ = start;
            fail("negative branch length");
        }
        node.length = value;
        node.has_length = true;
    }

    std::size_t parse_subtree() {
        skip_space();
        const std::size_t id = nodes_.size();
        nodes_.push_back({});
        nodes_[id].offset = pos_;
        if (peek() == '(') {
            ++pos_;
            while (true) {
                const std::size_t child = parse_subtree();
                nodes_[id].children.push_back(child);
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (peek() == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            nodes_[id].label = parse_label();  // internal labels are ignored
        } else {
            nodes_[id].label = parse_label();
            if (nodes_[id].label.empty()) fail("expected a leaf label or '('");
        }
        parse_length(nodes_[id]);
        return id;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

// Collects leaves in order of appearance and path sums from the root.
void walk(const std::vector<Node>& nodes, std::size_t id, double depth, bool is_root,
          std::vector<std::size_t>& leaf_nodes, std::vector<double>& depths) {
    const Node& node = nodes[id];
    if (!is_root && !node.has_length) throw ParseError("missing branch length", node.offset);
    const double here = is_root ? 0.0 : depth + node.length;
    if (node.children.empty()) {
        leaf_nodes.push_back(id);
        depths.push_back(here);
        return;
    }
    if (!is_root && node.children.size() == 1) {
        throw ParseError("internal vertex of degree 2", node.offset);
    }
    for (std::size_t child : node.children) walk(nodes, child, here, false, leaf_nodes, depths);
}

Clade collect(const std::vector<Node>& nodes, std::size_t id, const std::map<std::size_t, int>& leaf_index,
              std::map<Clade, double>& internal, bool is_root, int leaf_count) {
    const Node& node = nodes[id];
    if (node.children.empty()) return {leaf_index.at(id)};
    Clade clade;
    for (std::size_t child : node.children) {
        const Clade sub = collect(nodes, child, leaf_index, internal, false, leaf_count);
        clade.insert(clade.end(), sub.begin(), sub.end());
    }
    std::sort(clade.begin(), clade.end());
    if (!is_root && node.length > 0.0 && static_cast<int>(clade.size()) < leaf_count) {
        internal.emplace(clade, node.length);
    }
    return clade;
}

void append_double(std::string& out, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    out += buf;
}

void append_label(std::string& out, const std::string& label) {
    const bool plain = !label.empty() && std::none_of(label.begin(), label.end(), [](char c) {
        return std::string_view("()[]':;, \t\n\r").find(c) != std::string_view::npos;
    });
    if (plain) {
        out += label;
        return;
    }
    out.push_back('\'');
    for (char c : label) {
        if (c == '\'') out.push_back('\'');
        out.push_back(c);
    }
    out.push_back('\'');
}

}  // namespace

EquidistantTree parse_newick(std::string_view text) {
    NewickReader reader(text);
    std::size_t root = reader.parse_tree();
    const auto& nodes = reader.nodes();
    while (nodes[root].children.size() == 1) root = nodes[root].children.front();

    std::vector<std::size_t> leaf_nodes;
    std::vector<double> depths;
    walk(nodes, root, 0.0, true, leaf_nodes, depths);
    const int leaf_count = static_cast<int>(leaf_nodes.size());
    if (leaf_count < 2) throw ParseError("a tree needs at least 2 leaves", 0);

    std::vector<std::string> labels;
    std::map<std::size_t, int> leaf_index;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < leaf_nodes.size(); ++k) {
        const Node& leaf = nodes[leaf_nodes[k]];
        if (!seen.insert(leaf.label).second) throw ParseError("duplicate leaf label '" + leaf.label + "'", leaf.offset);
        labels.push_back(leaf.label);
        leaf_index.emplace(leaf_nodes[k], static_cast<int>(k) + 1);
    }

    const auto [lo, hi] = std::minmax_element(depths.begin(), depths.end());
    if (*hi - *lo > kNewickEquidistanceTol * std::max(std::abs(*hi), 1e-300)) {
        throw InvalidArgument("tree is not equidistant: root-to-leaf distances range from " +
                              std::to_string(*lo) + " to " + std::to_string(*hi));
    }

    std::map<Clade, double> internal;
    collect(nodes, root, leaf_index, internal, true, leaf_count);
    return EquidistantTree(leaf_count, std::move(internal), *hi, std::move(labels));
}

std::string write_newick(const EquidistantTree& tree) {
    const int n = tree.leaf_count();
    const auto& edges = tree.internal_edges();

    // Children of each clade (and of the root): maximal proper sub-clades plus uncovered leaves.
    struct Item {
        Clade leaves;
        double length;
        bool is_leaf;
    };
    // Lengths are printed as differences of node ages rounded to the printed
    // precision, so every root-to-leaf path still sums to the same decimal.
    auto rounded = [](double age) { return std::round(age * 1e6) / 1e6; };
    std::vector<Clade> clades = tree.clades();
    std::sort(clades.begin(), clades.end(), [](const Clade& a, const Clade& b) { return a.size() > b.size(); });

    auto children_of = [&](const Clade& parent) {
        std::vector<Item> items;
        std::vector<bool> covered(static_cast<std::size_t>(n) + 1, false);
        for (const Clade& c : clades) {
            if (c.size() >= parent.size() || !std::includes(parent.begin(), parent.end(), c.begin(), c.end())) continue;
            if (covered[static_cast<std::size_t>(c.front())]) continue;
            for (int leaf : c) covered[static_cast<std::size_t>(leaf)] = true;
            items.push_back({c, edges.at(c), false});
        }
        for (int leaf : parent) {
            if (!covered[static_cast<std::size_t>(leaf)]) {
                items.push_back({{leaf}, tree.external_edges()[static_cast<std::size_t>(leaf - 1)], true});
            }
        }
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.leaves.front() < b.leaves.front(); });
        return items;
    };

    std::string out;
    auto emit = [&](auto&& self, const Clade& parent, double parent_age) -> void {
        out.push_back('(');
        bool first = true;
        for (const Item& item : children_of(parent)) {
            if (!first) out.push_back(',');
            first = false;
            const double age = item.is_leaf ? 0.0 : parent_age - item.length;
            if (item.is_leaf) {
                append_label(out, tree.labels()[static_cast<std::size_t>(item.leaves.front() - 1)]);
            } else {
                self(self, item.leaves, age);
            }
            out.push_back(':');
            append_double(out, std::max(0.0, rounded(parent_age) - rounded(age)));
        }
        out.push_back(')');
    };
    Clade all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    emit(emit, all, tree.height());
    out.push_back(';');
    return out;
}

}  // namespace troptree
