#include "symdyn/pattern.hpp"

namespace symdyn {

PeriodicConfig PeriodicConfig::free_quotient(int k, int degree, std::vector<std::vector<int>> perms,
                                             std::vector<int> sym) {
    PeriodicConfig c;
    c.group = Group::free_group(k);
    c.degree = degree;
    if (static_cast<int>(perms.size()) != k) throw input_error("one permutation per generator");
    for (const auto& p : perms) {
        if (static_cast<int>(p.size()) != degree) throw input_error("permutation degree mismatch");
        std::vector<char> seen(static_cast<std::size_t>(degree), 0);
        for (int v : p) {
            if (v < 0 || v >= degree || seen[static_cast<std::size_t>(v)])
                throw input_error("not a permutation");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    if (static_cast<int>(sym.size()) != degree) throw input_error("one symbol per quotient vertex");
    c.perms = std::move(perms);
    c.sym = std::move(sym);
    return c;
}

} // namespace symdyn
