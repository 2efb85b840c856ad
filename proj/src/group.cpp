#include "symdyn/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <queue>
#include <unordered_set>

namespace symdyn {

Group::Group(GroupKind kind, int rank) : kind_(kind), rank_(rank) {
    if (rank < 1) throw input_error("group rank must be >= 1");
    if (kind == GroupKind::Line && rank != 1) throw input_error("line group has rank 1");
}

Elem Group::identity() const {
    switch (kind_) {
        case GroupKind::Line: return Elem{{0}};
        case GroupKind::Grid: return Elem{std::vector<int>(rank_, 0)};
        case GroupKind::Free: return Elem{{}};
    }
    return {};
}

bool Group::is_identity(const Elem& e) const {
    if (kind_ == GroupKind::Free) return e.v.empty();
    for (int x : e.v)
        if (x != 0) return false;
    return true;
}

std::vector<Elem> Group::generators() const {
    std::vector<Elem> out;
    switch (kind_) {
        case GroupKind::Line:
            out.push_back(Elem{{1}});
            out.push_back(Elem{{-1}});
            break;
        case GroupKind::Grid:
            for (int i = 0; i < rank_; ++i) {
                Elem e{std::vector<int>(rank_, 0)};
                e.v[i] = 1;
                out.push_back(e);
                e.v[i] = -1;
                out.push_back(e);
            }
            break;
        case GroupKind::Free:
            for (int i = 1; i <= rank_; ++i) {
                out.push_back(Elem{{i}});
                out.push_back(Elem{{-i}});
            }
            break;
    }
    std::sort(out.begin(), out.end(), [this](const Elem& a, const Elem& b) { return less(a, b); });
    return out;
}

void Group::check_elem(const Elem& e) const {
    if (kind_ == GroupKind::Free) {
        for (std::size_t i = 0; i < e.v.size(); ++i) {
            int x = e.v[i];
            if (x == 0 || std::abs(x) > rank_) throw input_error("free-group letter out of range");
            if (i + 1 < e.v.size() && e.v[i + 1] == -x)
                throw input_error("free-group word is not reduced");
        }
    } else {
        if (static_cast<int>(e.v.size()) != rank_) throw input_error("element arity mismatch");
    }
}

Elem Group::mul(const Elem& a, const Elem& b) const {
    if (kind_ == GroupKind::Free) {
        Elem r = a;
        for (int x : b.v) {
            if (!r.v.empty() && r.v.back() == -x)
                r.v.pop_back();
            else
                r.v.push_back(x);
        }
        return r;
    }
    Elem r = a;
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
    return r;
}

Elem Group::inv(const Elem& a) const {
    Elem r = a;
    if (kind_ == GroupKind::Free) {
        std::reverse(r.v.begin(), r.v.end());
        for (int& x : r.v) x = -x;
    } else {
        for (int& x : r.v) x = -x;
    }
    return r;
}

int Group::norm(const Elem& a) const {
    if (kind_ == GroupKind::Free) return static_cast<int>(a.v.size());
    int s = 0;
    for (int x : a.v) s += std::abs(x);
    return s;
}

namespace {
// Free letters ranked a < a^-1 < b < b^-1 < ...
inline int letter_rank(int x) { return (std::abs(x) - 1) * 2 + (x < 0 ? 1 : 0); }
} // namespace

bool Group::less(const Elem& a, const Elem& b) const {
    switch (kind_) {
        case GroupKind::Line:
            return a.v[0] < b.v[0];
        case GroupKind::Grid: {
            int na = 0, nb = 0;
            for (int x : a.v) na = std::max(na, std::abs(x));
            for (int x : b.v) nb = std::max(nb, std::abs(x));
            if (na != nb) return na < nb;
            return a.v < b.v;
        }
        case GroupKind::Free: {
            if (a.v.size() != b.v.size()) return a.v.size() < b.v.size();
            for (std::size_t i = 0; i < a.v.size(); ++i)
                if (a.v[i] != b.v[i]) return letter_rank(a.v[i]) < letter_rank(b.v[i]);
            return false;
        }
    }
    return false;
}

std::string Group::show(const Elem& e) const {
    switch (kind_) {
        case GroupKind::Line:
            return std::to_string(e.v[0]);
        case GroupKind::Grid: {
            std::string s = "(";
            for (std::size_t i = 0; i < e.v.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(e.v[i]);
            }
            return s + ")";
        }
        case GroupKind::Free: {
            if (e.v.empty()) return "e";
            std::string s;
            for (int x : e.v) {
                char c = static_cast<char>('a' + std::abs(x) - 1);
                s += (x > 0) ? c : static_cast<char>(std::toupper(c));
            }
            return s;
        }
    }
    return "";
}

Elem Group::parse(const std::string& s) const {
    switch (kind_) {
        case GroupKind::Line: {
            std::size_t pos = 0;
            int n = std::stoi(s, &pos);
            if (pos != s.size()) throw parse_error("bad line element: " + s);
            return Elem{{n}};
        }
        case GroupKind::Grid: {
            std::vector<int> c;
            std::string t = s;
            if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
            std::size_t start = 0;
            while (start <= t.size()) {
                std::size_t comma = t.find(',', start);
                std::string part = t.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                if (part.empty()) throw parse_error("bad grid element: " + s);
                c.push_back(std::stoi(part));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            if (static_cast<int>(c.size()) != rank_) throw parse_error("grid element arity mismatch: " + s);
            return Elem{std::move(c)};
        }
        case GroupKind::Free: {
            if (s == "e" || s.empty()) return identity();
            Elem e;
            for (char ch : s) {
                int x;
                if (std::islower(static_cast<unsigned char>(ch)))
                    x = ch - 'a' + 1;
                else if (std::isupper(static_cast<unsigned char>(ch)))
                    x = -(ch - 'A' + 1);
                else
                    throw parse_error("bad free-group letter in: " + s);
                if (std::abs(x) > rank_) throw parse_error("generator out of range in: " + s);
                if (!e.v.empty() && e.v.back() == -x)
                    throw parse_error("free-group word not reduced: " + s);
                e.v.push_back(x);
            }
            return e;
        }
    }
    throw parse_error("unreachable");
}

Domain::Domain(Group g, std::vector<Elem> cells) : group_(g), cells_(std::move(cells)) {
    for (const Elem& e : cells_) group_.check_elem(e);
    std::sort(cells_.begin(), cells_.end(),
              [this](const Elem& a, const Elem& b) { return group_.less(a, b); });
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool Domain::contains(const Elem& e) const { return index_of(e) >= 0; }

int Domain::index_of(const Elem& e) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), e,
                               [this](const Elem& a, const Elem& b) { return group_.less(a, b); });
    if (it != cells_.end() && *it == e) return static_cast<int>(it - cells_.begin());
    return -1;
}

Domain Domain::translated(const Elem& a) const {
    std::vector<Elem> out;
    out.reserve(cells_.size());
    for (const Elem& e : cells_) out.push_back(group_.mul(a, e));
    return Domain(group_, std::move(out));
}

Domain Domain::inverse() const {
    std::vector<Elem> out;
    out.reserve(cells_.size());
    for (const Elem& e : cells_) out.push_back(group_.inv(e));
    return Domain(group_, std::move(out));
}

Domain Domain::product(const Domain& e) const {
    std::vector<Elem> out;
    out.reserve(cells_.size() * e.cells_.size());
    for (const Elem& a : cells_)
        for (const Elem& b : e.cells_) out.push_back(group_.mul(a, b));
    return Domain(group_, std::move(out));
}

Domain Domain::interior(int r) const {
    Domain br = ball(group_, r);
    std::vector<Elem> out;
    for (const Elem& a : cells_) {
        bool ok = true;
        for (const Elem& b : br.cells()) {
            if (!contains(group_.mul(a, b))) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(a);
    }
    return Domain(group_, std::move(out));
}

Domain Domain::unioned(const Domain& e) const {
    std::vector<Elem> out = cells_;
    out.insert(out.end(), e.cells_.begin(), e.cells_.end());
    return Domain(group_, std::move(out));
}

Domain Domain::intersect(const Domain& e) const {
    std::vector<Elem> out;
    for (const Elem& a : cells_)
        if (e.contains(a)) out.push_back(a);
    return Domain(group_, std::move(out));
}

Domain Domain::minus(const Domain& e) const {
    std::vector<Elem> out;
    for (const Elem& a : cells_)
        if (!e.contains(a)) out.push_back(a);
    return Domain(group_, std::move(out));
}

bool Domain::connected() const {
    if (cells_.empty()) return true;
    std::vector<char> seen(cells_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    auto gens = group_.generators();
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (const Elem& s : gens) {
            int j = index_of(group_.mul(cells_[i], s));
            if (j >= 0 && !seen[j]) {
                seen[j] = 1;
                ++reached;
                q.push(j);
            }
        }
    }
    return reached == cells_.size();
}

Domain ball(const Group& g, int r) {
    if (r < 0) throw input_error("ball radius must be >= 0");
    std::vector<Elem> out;
    switch (g.kind()) {
        case GroupKind::Line:
            for (int i = -r; i <= r; ++i) out.push_back(line_elem(i));
            break;
        case GroupKind::Grid: {
            // enumerate l1 ball by DFS over coordinates
            std::vector<int> c(g.rank(), 0);
            std::function<void(int, int)> rec = [&](int i, int left) {
                if (i == g.rank()) {
                    out.push_back(Elem{c});
                    return;
                }
                for (int x = -left; x <= left; ++x) {
                    c[i] = x;
                    rec(i + 1, left - std::abs(x));
                }
                c[i] = 0;
            };
            rec(0, r);
            break;
        }
        case GroupKind::Free: {
            // reduced words of length <= r
            out.push_back(g.identity());
            std::vector<Elem> frontier{g.identity()};
            for (int len = 1; len <= r; ++len) {
                std::vector<Elem> next;
                for (const Elem& w : frontier) {
                    for (int x = 1; x <= g.rank(); ++x) {
                        for (int sgn : {1, -1}) {
                            int letter = sgn * x;
                            if (!w.v.empty() && w.v.back() == -letter) continue;
                            Elem e = w;
                            e.v.push_back(letter);
                            next.push_back(e);
                        }
                    }
                }
                out.insert(out.end(), next.begin(), next.end());
                frontier = std::move(next);
            }
            break;
        }
    }
    return Domain(g, std::move(out));
}

Domain interval(int lo, int hi) {
    std::vector<Elem> out;
    for (int i = lo; i <= hi; ++i) out.push_back(line_elem(i));
    return Domain(Group::line(), std::move(out));
}

} // namespace symdyn
