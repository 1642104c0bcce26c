#include "eqboot/groups.hpp"

namespace eqboot {

namespace {

int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

// One counterclockwise quarter turn moves pixel (i, j) to (W-1-j, i).
// Its inverse therefore maps a destination (i, j) back to (j, W-1-i).
void rotate_dest_to_source(int turns, int h, int w, int& i, int& j) {
    for (int t = 0; t < turns; ++t) {
        const int si = j;
        const int sj = w - 1 - i;
        i = si;
        j = sj;
        (void)h;
    }
}

// Linear part of the rotation applied to a displacement vector: (a, b) -> (-b, a).
void rotate_displacement(int turns, int& a, int& b) {
    for (int t = 0; t < turns; ++t) {
        const int na = -b;
        const int nb = a;
        a = na;
        b = nb;
    }
}

}  // namespace

GroupAction::GroupAction(Shape shape, int max_shift, bool include_rotations)
    : shape_(shape), max_shift_(max_shift), rotations_(include_rotations) {
    if (shape.height <= 0 || shape.width <= 0) {
        throw std::invalid_argument("GroupAction: shape dimensions must be positive");
    }
    if (max_shift < 0) {
        throw std::invalid_argument("GroupAction: max_shift must be nonnegative");
    }
    if (rotations_ && !shape.is_square()) {
        throw std::invalid_argument("GroupAction: rotations require a square image");
    }
}

GroupElement GroupAction::normalized(const GroupElement& g) const {
    return GroupElement{mod(g.dy, shape_.height), mod(g.dx, shape_.width),
                        mod(g.quarter_turns, 4)};
}

GroupElement GroupAction::compose(const GroupElement& a, const GroupElement& b) const {
    // T_a T_b = S_{va} R^{ra} S_{vb} R^{rb} = S_{va + L^{ra}(vb)} R^{ra+rb}
    int dy = b.dy;
    int dx = b.dx;
    rotate_displacement(mod(a.quarter_turns, 4), dy, dx);
    return normalized(GroupElement{a.dy + dy, a.dx + dx, a.quarter_turns + b.quarter_turns});
}

GroupElement GroupAction::inverse(const GroupElement& g) const {
    const int rinv = mod(-g.quarter_turns, 4);
    int dy = -g.dy;
    int dx = -g.dx;
    rotate_displacement(rinv, dy, dx);
    return normalized(GroupElement{dy, dx, rinv});
}

std::vector<GroupElement> GroupAction::full_enumeration() const {
    const int sh = max_shift_ == 0 ? 1 : shape_.height;
    const int sw = max_shift_ == 0 ? 1 : shape_.width;
    const int rot = rotations_ ? 4 : 1;
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(sh) * sw * rot);
    for (int dy = 0; dy < sh; ++dy) {
        for (int dx = 0; dx < sw; ++dx) {
            for (int r = 0; r < rot; ++r) {
                out.push_back(GroupElement{dy, dx, r});
            }
        }
    }
    return out;
}

std::size_t GroupAction::full_group_size() const {
    const std::size_t shifts =
        max_shift_ == 0 ? 1 : static_cast<std::size_t>(shape_.height) * shape_.width;
    return shifts * (rotations_ ? 4 : 1);
}

std::vector<int> source_index_map(const GroupAction& action, const GroupElement& g) {
    const Shape shape = action.shape();
    const int h = shape.height;
    const int w = shape.width;
    const GroupElement e = action.normalized(g);
    if (e.quarter_turns != 0 && h != w) {
        throw std::invalid_argument("act: rotation on a non-square image");
    }
    std::vector<int> src(static_cast<std::size_t>(h) * w);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            // T_g = Shift o Rot, so dest <- rot^{-1}(shift^{-1}(dest)).
            int si = mod(i - e.dy, h);
            int sj = mod(j - e.dx, w);
            rotate_dest_to_source(e.quarter_turns, h, w, si, sj);
            src[static_cast<std::size_t>(i) * w + j] = si * w + sj;
        }
    }
    return src;
}

Signal act(const GroupAction& action, const GroupElement& g, const Signal& x) {
    if (!(x.shape() == action.shape())) {
        throw std::invalid_argument("act: signal shape does not match group action shape");
    }
    if (g.is_identity()) {
        return x;
    }
    const std::vector<int> src = source_index_map(action, g);
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = x.data()[src[static_cast<std::size_t>(i)]];
    }
    return Signal(std::move(out), x.shape());
}

Signal act_inverse(const GroupAction& action, const GroupElement& g, const Signal& x) {
    return act(action, action.inverse(g), x);
}

GroupElement sample_element(const GroupAction& action, RngStream& rng) {
    const int t = action.max_shift();
    GroupElement g;
    g.dy = static_cast<int>(rng.next_int(-t, t));
    g.dx = static_cast<int>(rng.next_int(-t, t));
    g.quarter_turns = action.rotations() ? static_cast<int>(rng.next_int(0, 3)) : 0;
    return g;
}

Eigen::MatrixXd dense_matrix(const GroupAction& action, const GroupElement& g) {
    const int n = action.shape().n();
    if (n > 4096) {
        throw std::invalid_argument("dense_matrix: n exceeds the 4096 dense limit");
    }
    const std::vector<int> src = source_index_map(action, g);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        T(i, src[static_cast<std::size_t>(i)]) = 1.0;
    }
    return T;
}

}  // namespace eqboot
