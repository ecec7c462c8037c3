#include "cosetqkd/group.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>

#include "cosetqkd/errors.hpp"

namespace cosetqkd::finite {

int GroupTable::power(int g, long e) const {
    int r = 0;
    long k = ((e % order) + order) % order;  // element orders divide |G|
    int base = g;
    while (k > 0) {
        if (k & 1) r = at(r, base);
        base = at(base, base);
        k >>= 1;
    }
    return r;
}

int GroupTable::element_order(int g) const {
    int x = g;
    int k = 1;
    while (x != 0) {
        x = at(x, g);
        ++k;
    }
    return k;
}

static void check_order_cap(long n, const char *what) {
    if (n > kGroupOrderCap) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: order %ld exceeds cap %d", what, n,
                      kGroupOrderCap);
        throw resource_error(buf);
    }
}

GroupTable cyclic_group(int n) {
    require_valid(n >= 1, "cyclic_group: order must be >= 1");
    check_order_cap(n, "cyclic_group");
    GroupTable G;
    G.order = n;
    G.mul.resize(static_cast<size_t>(n) * n);
    G.inv.resize(n);
    G.labels.resize(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            G.mul[static_cast<size_t>(a) * n + b] = static_cast<uint16_t>((a + b) % n);
        G.inv[a] = static_cast<uint16_t>((n - a) % n);
        if (a == 0)
            G.labels[a] = "e";
        else if (a == 1)
            G.labels[a] = "g";
        else
            G.labels[a] = "g^" + std::to_string(a);
    }
    G.name = "cyclic:" + std::to_string(n);
    return G;
}

GroupTable dihedral_group(int n) {
    require_valid(n >= 1, "dihedral_group: order parameter must be >= 1");
    check_order_cap(2L * n, "dihedral_group");
    // Element j in [0, n) is the rotation r^j; element n + j is t r^j.
    // Relations: r^a r^b = r^{a+b}, (t r^a)(r^b) = t r^{a+b},
    // (r^a)(t r^b) = t r^{b-a}, (t r^a)(t r^b) = r^{b-a}.
    GroupTable G;
    G.order = 2 * n;
    G.mul.resize(static_cast<size_t>(G.order) * G.order);
    G.inv.resize(G.order);
    G.labels.resize(G.order);
    auto idx = [n](bool flip, int j) { return (flip ? n : 0) + ((j % n) + n) % n; };
    for (int a = 0; a < G.order; ++a) {
        bool fa = a >= n;
        int ja = fa ? a - n : a;
        for (int b = 0; b < G.order; ++b) {
            bool fb = b >= n;
            int jb = fb ? b - n : b;
            int j = fb ? jb - ja : ja + jb;
            G.mul[static_cast<size_t>(a) * G.order + b] =
                static_cast<uint16_t>(idx(fa != fb, j));
        }
        G.inv[a] = static_cast<uint16_t>(fa ? a : idx(false, -ja));
        if (a == 0)
            G.labels[a] = "e";
        else if (!fa)
            G.labels[a] = ja == 1 ? "r" : "r^" + std::to_string(ja);
        else
            G.labels[a] = ja == 0 ? "t" : (ja == 1 ? "tr" : "tr^" + std::to_string(ja));
    }
    G.name = "dihedral:" + std::to_string(n);
    return G;
}

GroupTable product_group(const std::vector<GroupTable> &factors) {
    require_valid(!factors.empty(), "product_group: needs at least one factor");
    long total = 1;
    for (const auto &F : factors) {
        total *= F.order;
        check_order_cap(total, "product_group");
    }
    GroupTable G;
    G.order = static_cast<int>(total);
    G.mul.resize(static_cast<size_t>(G.order) * G.order);
    G.inv.resize(G.order);
    G.labels.resize(G.order);
    int nf = static_cast<int>(factors.size());
    // Mixed-radix index: last factor varies fastest.
    std::vector<int> da(nf), db(nf);
    auto decode = [&](int x, std::vector<int> &out) {
        for (int i = nf - 1; i >= 0; --i) {
            out[i] = x % factors[i].order;
            x /= factors[i].order;
        }
    };
    auto encode = [&](const std::vector<int> &v) {
        int x = 0;
        for (int i = 0; i < nf; ++i) x = x * factors[i].order + v[i];
        return x;
    };
    std::vector<int> dc(nf);
    for (int a = 0; a < G.order; ++a) {
        decode(a, da);
        for (int b = 0; b < G.order; ++b) {
            decode(b, db);
            for (int i = 0; i < nf; ++i) dc[i] = factors[i].at(da[i], db[i]);
            G.mul[static_cast<size_t>(a) * G.order + b] = static_cast<uint16_t>(encode(dc));
        }
        for (int i = 0; i < nf; ++i) dc[i] = factors[i].inv[da[i]];
        G.inv[a] = static_cast<uint16_t>(encode(dc));
        std::string lab = "(";
        for (int i = 0; i < nf; ++i) {
            if (i) lab += ",";
            lab += factors[i].labels[da[i]];
        }
        lab += ")";
        G.labels[a] = lab;
    }
    std::string nm;
    for (int i = 0; i < nf; ++i) {
        if (i) nm += "*";
        nm += factors[i].name;
    }
    G.name = nm;
    return G;
}

static GroupTable parse_atom(const std::string &atom) {
    auto parse_int = [&](const std::string &s, const char *ctx) {
        try {
            size_t pos = 0;
            int v = std::stoi(s, &pos);
            require_valid(pos == s.size() && v >= 1, ctx);
            return v;
        } catch (const validation_error &) {
            throw;
        } catch (const std::exception &) {
            throw validation_error(ctx);
        }
    };
    if (atom.rfind("cyclic:", 0) == 0)
        return cyclic_group(parse_int(atom.substr(7), "group spec: bad cyclic order"));
    if (atom.rfind("dihedral:", 0) == 0)
        return dihedral_group(parse_int(atom.substr(9), "group spec: bad dihedral order"));
    if (!atom.empty() && (atom[0] == 'z' || atom[0] == 'Z')) {
        std::string rest = atom.substr(1);
        size_t caret = rest.find('^');
        int n, k = 1;
        if (caret == std::string::npos) {
            n = parse_int(rest, "group spec: bad cyclic order");
        } else {
            n = parse_int(rest.substr(0, caret), "group spec: bad cyclic order");
            k = parse_int(rest.substr(caret + 1), "group spec: bad power");
        }
        if (k == 1) return cyclic_group(n);
        std::vector<GroupTable> fs(k, cyclic_group(n));
        GroupTable G = product_group(fs);
        G.name = "z" + std::to_string(n) + "^" + std::to_string(k);
        return G;
    }
    throw validation_error("group spec: unrecognized form '" + atom + "'");
}

GroupTable parse_group_spec(const std::string &spec) {
    require_valid(!spec.empty(), "group spec: empty string");
    std::vector<GroupTable> parts;
    size_t start = 0;
    while (true) {
        size_t star = spec.find('*', start);
        std::string atom =
            star == std::string::npos ? spec.substr(start) : spec.substr(start, star - start);
        parts.push_back(parse_atom(atom));
        if (star == std::string::npos) break;
        start = star + 1;
    }
    if (parts.size() == 1) return std::move(parts[0]);
    return product_group(parts);
}

void validate(const GroupTable &G) {
    require_valid(G.order >= 1 && G.order <= kGroupOrderCap, "group: bad order");
    require_valid(G.mul.size() == static_cast<size_t>(G.order) * G.order &&
                      G.inv.size() == static_cast<size_t>(G.order),
                  "group: table size mismatch");
    for (uint16_t v : G.mul) require_valid(v < G.order, "group: entry out of range");
    for (int a = 0; a < G.order; ++a) {
        require_valid(G.at(0, a) == a && G.at(a, 0) == a, "group: identity fails");
        require_valid(G.at(a, G.inv[a]) == 0 && G.at(G.inv[a], a) == 0,
                      "group: inverse fails");
    }
    if (G.order <= 64) {
        for (int a = 0; a < G.order; ++a)
            for (int b = 0; b < G.order; ++b)
                for (int c = 0; c < G.order; ++c)
                    require_valid(G.at(G.at(a, b), c) == G.at(a, G.at(b, c)),
                                  "group: associativity fails");
    } else {
        std::mt19937_64 eng(0x9e3779b97f4a7c15ULL);
        for (int trial = 0; trial < 1000; ++trial) {
            int a = static_cast<int>(eng() % G.order);
            int b = static_cast<int>(eng() % G.order);
            int c = static_cast<int>(eng() % G.order);
            require_valid(G.at(G.at(a, b), c) == G.at(a, G.at(b, c)),
                          "group: associativity fails");
        }
    }
}

bool Subgroup::contains(int g) const {
    return std::binary_search(elems.begin(), elems.end(), g);
}

Subgroup subgroup_from_generators(const GroupTable &G, const std::vector<int> &gens) {
    for (int g : gens)
        require_valid(g >= 0 && g < G.order, "subgroup: generator out of range");
    std::vector<char> in(G.order, 0);
    in[0] = 1;
    std::vector<int> frontier = {0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int x : frontier) {
            for (int g : gens) {
                int y = G.at(x, g);
                if (!in[y]) {
                    in[y] = 1;
                    next.push_back(y);
                }
            }
        }
        frontier = std::move(next);
    }
    Subgroup H;
    for (int i = 0; i < G.order; ++i)
        if (in[i]) H.elems.push_back(i);
    return H;
}

void validate(const GroupTable &G, const Subgroup &H) {
    require_valid(!H.elems.empty() && H.elems.front() == 0,
                  "subgroup: must contain identity");
    require_valid(std::is_sorted(H.elems.begin(), H.elems.end()) &&
                      std::adjacent_find(H.elems.begin(), H.elems.end()) == H.elems.end(),
                  "subgroup: elements must be sorted and distinct");
    for (int h : H.elems)
        require_valid(h >= 0 && h < G.order, "subgroup: element out of range");
    for (int a : H.elems)
        for (int b : H.elems)
            require_valid(H.contains(G.at(a, b)), "subgroup: not closed");
}

int intersection_order(const Subgroup &H, const Subgroup &K) {
    int count = 0;
    size_t i = 0, j = 0;
    while (i < H.elems.size() && j < K.elems.size()) {
        if (H.elems[i] == K.elems[j]) {
            ++count; ++i; ++j;
        } else if (H.elems[i] < K.elems[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return count;
}

std::vector<Subgroup> two_generated_subgroups(const GroupTable &G) {
    std::set<std::vector<int>> seen;
    std::vector<Subgroup> out;
    auto add = [&](Subgroup H) {
        if (seen.insert(H.elems).second) out.push_back(std::move(H));
    };
    add(subgroup_from_generators(G, {}));
    for (int a = 0; a < G.order; ++a) {
        add(subgroup_from_generators(G, {a}));
        for (int b = a + 1; b < G.order; ++b)
            add(subgroup_from_generators(G, {a, b}));
    }
    std::sort(out.begin(), out.end(), [](const Subgroup &x, const Subgroup &y) {
        if (x.elems.size() != y.elems.size()) return x.elems.size() < y.elems.size();
        return x.elems < y.elems;
    });
    return out;
}

}  // namespace cosetqkd::finite
