#pragma once

#include "eqboot/core.hpp"

#include <vector>

namespace eqboot {

/// One transform of the group: a circular shift by (dy, dx) pixels applied
/// after `quarter_turns` counterclockwise 90-degree rotations. All actions are
/// exact permutations of pixels, so inverses are exact and T_g^T T_g = I holds
/// bitwise.
struct GroupElement {
    int dy = 0;
    int dx = 0;
    int quarter_turns = 0;

    bool is_identity() const { return dy == 0 && dx == 0 && quarter_turns == 0; }
};

/// Finite group of signal transforms on an H x W torus, plus the sampling
/// distribution over it: shifts uniform on the box [-max_shift, max_shift]^2,
/// rotations uniform on the four quarter turns when enabled. The group itself
/// (used for exact enumeration) is the full set of torus shifts generated by
/// the box, times the rotation subgroup.
class GroupAction {
public:
    GroupAction(Shape shape, int max_shift, bool include_rotations);

    Shape shape() const { return shape_; }
    int max_shift() const { return max_shift_; }
    bool rotations() const { return rotations_; }

    GroupElement identity() const { return GroupElement{}; }

    /// Canonical (dy, dx) in [0, H) x [0, W), quarter_turns in [0, 4).
    GroupElement normalized(const GroupElement& g) const;

    bool is_trivial() const { return max_shift_ == 0 && !rotations_; }

    /// compose(a, b): the element acting as "b first, then a" (T_a * T_b).
    GroupElement compose(const GroupElement& a, const GroupElement& b) const;

    GroupElement inverse(const GroupElement& g) const;

    /// Every element, in a fixed canonical order (shift-major, then rotation).
    /// Size is H*W*4 when rotations are on (or 4 / H*W / 1 for the degenerate
    /// cases); max_shift == 0 contributes only the zero shift.
    std::vector<GroupElement> full_enumeration() const;

    std::size_t full_group_size() const;

private:
    Shape shape_;
    int max_shift_;
    bool rotations_;
};

Signal act(const GroupAction& action, const GroupElement& g, const Signal& x);
Signal act_inverse(const GroupAction& action, const GroupElement& g, const Signal& x);

/// dy, dx uniform on [-max_shift, max_shift]; quarter turns uniform on {0..3}
/// when rotations are enabled. Draw order is dy, dx, quarter_turns; degenerate
/// ranges consume no randomness.
GroupElement sample_element(const GroupAction& action, RngStream& rng);

/// Permutation matrix of T_g (n <= 4096).
Eigen::MatrixXd dense_matrix(const GroupAction& action, const GroupElement& g);

/// Index map: source pixel index for each destination pixel index under T_g,
/// i.e. (T_g x)[i] = x[perm[i]]. Shared by the dense and in-place paths.
std::vector<int> source_index_map(const GroupAction& action, const GroupElement& g);

}  // namespace eqboot
