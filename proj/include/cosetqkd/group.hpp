#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cosetqkd::finite {

// Finite group as an explicit multiplication table. Identity is element 0.
struct GroupTable {
    int order = 0;
    std::vector<uint16_t> mul;  // row-major order x order
    std::vector<uint16_t> inv;
    std::vector<std::string> labels;
    std::string name;

    int at(int a, int b) const { return mul[static_cast<size_t>(a) * order + b]; }
    int power(int g, long e) const;
    int element_order(int g) const;
};

constexpr int kGroupOrderCap = 4096;

GroupTable cyclic_group(int n);
GroupTable dihedral_group(int n);  // <r, t | r^n = t^2 = (tr)^2 = 1>, order 2n
GroupTable product_group(const std::vector<GroupTable> &factors);

// String forms: "cyclic:N", "dihedral:N", "zN", "zN^K", and '*'-joined
// products such as "z2*z4" or "z2^4".
GroupTable parse_group_spec(const std::string &spec);

// Validates closure/identity/inverses and associativity (exhaustive for
// order <= 64, randomized spot checks above).
void validate(const GroupTable &G);

struct Subgroup {
    std::vector<int> elems;  // sorted, contains 0
    int order() const { return static_cast<int>(elems.size()); }
    bool contains(int g) const;
};

Subgroup subgroup_from_generators(const GroupTable &G, const std::vector<int> &gens);
void validate(const GroupTable &G, const Subgroup &H);

int intersection_order(const Subgroup &H, const Subgroup &K);

// All subgroups generated by at most two elements, deduplicated. For dihedral
// groups this is every subgroup (each is cyclic or generated by a rotation
// plus a reflection).
std::vector<Subgroup> two_generated_subgroups(const GroupTable &G);

}  // namespace cosetqkd::finite
