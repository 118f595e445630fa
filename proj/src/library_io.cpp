#include "rbhp/library_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little, "library files are little-endian");

namespace rbhp {

namespace {

constexpr std::uint32_t kTreeVersion = 1;
constexpr std::uint32_t kProximityVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct Writer {
    std::string buf;

    void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { buf.append(reinterpret_cast<const char*>(&v), 4); }
    void u64(std::uint64_t v) { buf.append(reinterpret_cast<const char*>(&v), 8); }
    void f64(double v) { buf.append(reinterpret_cast<const char*>(&v), 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf.append(s);
    }
    void params(const Param& p) {
        for (double v : p) f64(v);
    }
    void matrix(const Matrix& m) {  // row-major
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
    void vector(const Vector& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
    }
};

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw BadLibraryFile("library file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v;
        std::memcpy(&v, buf.data() + pos, 4);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v;
        std::memcpy(&v, buf.data() + pos, 8);
        pos += 8;
        return v;
    }
    double f64() {
        need(8);
        double v;
        std::memcpy(&v, buf.data() + pos, 8);
        pos += 8;
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
    Param params(int d) {
        Param p(static_cast<std::size_t>(d));
        for (auto& v : p) v = f64();
        return p;
    }
    Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = f64();
        return m;
    }
    Vector vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = f64();
        return v;
    }
};

void write_box(Writer& w, const ParamBox& box) {
    w.u32(static_cast<std::uint32_t>(box.dim()));
    w.u32(static_cast<std::uint32_t>(box.frozen().size()));
    for (const auto& [axis, value] : box.frozen()) {
        w.u32(static_cast<std::uint32_t>(axis));
        w.f64(value);
    }
    w.params(box.lower());
    w.params(box.upper());
}

ParamBox read_box(Reader& r) {
    const int d = static_cast<int>(r.u32());
    std::map<int, double> frozen;
    const std::uint32_t nf = r.u32();
    for (std::uint32_t i = 0; i < nf; ++i) {
        const int axis = static_cast<int>(r.u32());
        frozen[axis] = r.f64();
    }
    Param lo = r.params(d), hi = r.params(d);
    return ParamBox(std::move(lo), std::move(hi), std::move(frozen));
}

void write_space(Writer& w, const RBSpace& space) {
    const int n = space.size();
    w.u32(static_cast<std::uint32_t>(n));
    for (const auto& ra : space.reduced_A()) w.matrix(ra);
    for (const auto& rf : space.reduced_F()) w.vector(rf);
    w.matrix(space.g_ff());
    w.matrix(space.g_fa());
    w.matrix(space.g_aa());
}

RBSpace read_space(Reader& r, int qa, int qf) {
    const int n = static_cast<int>(r.u32());
    std::vector<Matrix> reduced_A;
    for (int q = 0; q < qa; ++q) reduced_A.push_back(r.matrix(n, n));
    std::vector<Vector> reduced_F;
    for (int q = 0; q < qf; ++q) reduced_F.push_back(r.vector(n));
    Matrix g_ff = r.matrix(qf, qf);
    Matrix g_fa = r.matrix(qf, static_cast<Eigen::Index>(n) * qa);
    Matrix g_aa = r.matrix(static_cast<Eigen::Index>(n) * qa, static_cast<Eigen::Index>(n) * qa);
    return RBSpace::from_online_data(qa, qf, std::move(reduced_A), std::move(reduced_F), std::move(g_ff),
                                     std::move(g_fa), std::move(g_aa));
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw BadLibraryFile("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_with_checksum(Writer& w, const std::string& path) {
    w.u64(fnv1a(w.buf.substr(0, w.buf.size())));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw BadLibraryFile("cannot open " + path + " for writing");
    f.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    if (!f) throw BadLibraryFile("write failed for " + path);
}

std::string checked_payload(const std::string& bytes) {
    if (bytes.size() < 12) throw BadLibraryFile("library file truncated");
    const std::string payload = bytes.substr(0, bytes.size() - 8);
    std::uint64_t stored;
    std::memcpy(&stored, bytes.data() + bytes.size() - 8, 8);
    if (fnv1a(payload) != stored) throw BadLibraryFile("library file checksum mismatch");
    return payload;
}

bool same_params(const Param& a, const Param& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

LibraryFileStats save_library(const RBLibrary& library, const std::string& path) {
    LibraryFileStats stats;
    Writer w;
    w.buf.append("RBHP");
    w.u32(kTreeVersion);
    w.str(library.descriptor());
    write_box(w, library.root().box);
    // Qa/Qf from any leaf space
    const RBSpace& first = *library.leaf(0).space;
    w.u32(static_cast<std::uint32_t>(first.q_a()));
    w.u32(static_cast<std::uint32_t>(first.q_f()));
    const LibraryConfig& cfg = library.config();
    w.u32(static_cast<std::uint32_t>(cfg.n_basis));
    w.f64(cfg.eps);
    w.u64(cfg.train_size);
    w.u64(cfg.seed);
    w.u32(static_cast<std::uint32_t>(cfg.l_max));
    w.u8(cfg.root_init ? 1 : 0);
    if (cfg.root_init) w.params(*cfg.root_init);
    w.u32(static_cast<std::uint32_t>(library.num_leaves()));

    for (int k = 0; k < library.num_leaves(); ++k) {
        const TreeNode& leaf = library.leaf(k);
        const std::size_t geom_start = w.buf.size();
        w.u32(static_cast<std::uint32_t>(leaf.id.bits.size()));
        for (auto b : leaf.id.bits) w.u8(b);
        w.params(leaf.box.lower());
        w.params(leaf.box.upper());
        stats.geometry_bytes += w.buf.size() - geom_start;
        w.f64(leaf.eta_max);
        write_space(w, *leaf.space);
    }
    write_file_with_checksum(w, path);
    stats.total_bytes = w.buf.size();
    return stats;
}

RBLibrary load_library(const std::string& path) {
    const std::string bytes = read_file(path);
    const std::string payload = checked_payload(bytes);
    Reader r{payload};

    r.need(4);
    if (payload.substr(0, 4) != "RBHP") throw BadLibraryFile("bad magic (not an RBHP library)");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kTreeVersion) throw BadLibraryFile("unsupported library version " + std::to_string(version));

    const std::string descriptor = r.str();
    const ParamBox root_box = read_box(r);
    const int qa = static_cast<int>(r.u32());
    const int qf = static_cast<int>(r.u32());
    LibraryConfig cfg;
    cfg.n_basis = static_cast<int>(r.u32());
    cfg.eps = r.f64();
    cfg.train_size = r.u64();
    cfg.seed = r.u64();
    cfg.l_max = static_cast<int>(r.u32());
    if (r.u8()) cfg.root_init = r.params(root_box.dim());
    const std::uint32_t K = r.u32();
    if (K < 1) throw BadLibraryFile("library has no leaves");

    auto root = std::make_unique<TreeNode>();
    root->id = BoolVec{};
    root->box = root_box;

    for (std::uint32_t k = 0; k < K; ++k) {
        const std::uint32_t bits_len = r.u32();
        if (bits_len < 1) throw BadLibraryFile("empty leaf bit path");
        std::vector<std::uint8_t> bits(bits_len);
        for (auto& b : bits) b = r.u8();
        if (bits[0] != 1) throw BadLibraryFile("leaf bit path must start with 1");

        TreeNode* node = root.get();
        for (std::size_t i = 1; i < bits.size(); ++i) {
            if (node->is_leaf()) {
                // split axes are not stored: they follow from the
                // deterministic longest-edge rule applied to the box
                auto split = split_longest_edge(node->box);
                node->split_axis = split.axis;
                node->child0 = std::make_unique<TreeNode>();
                node->child0->id = node->id.child(0);
                node->child0->box = std::move(split.left);
                node->child1 = std::make_unique<TreeNode>();
                node->child1->id = node->id.child(1);
                node->child1->box = std::move(split.right);
            }
            node = bits[i] ? node->child1.get() : node->child0.get();
        }
        const Param lo = r.params(root_box.dim());
        const Param hi = r.params(root_box.dim());
        if (!same_params(lo, node->box.lower()) || !same_params(hi, node->box.upper()))
            throw BadLibraryFile("leaf box does not match the derived partition geometry");
        if (node->space) throw BadLibraryFile("duplicate leaf record");
        node->eta_max = r.f64();
        node->space = read_space(r, qa, qf);
    }
    if (r.pos != payload.size()) throw BadLibraryFile("trailing bytes after the last leaf record");

    RBLibrary library(std::move(root), descriptor, cfg);
    if (library.num_leaves() != static_cast<int>(K)) throw BadLibraryFile("leaf count mismatch after reconstruction");
    for (int k = 0; k < library.num_leaves(); ++k) {
        if (!library.leaf(k).space) throw BadLibraryFile("leaf without a stored RB space");
    }
    return library;
}

LibraryFileStats save_proximity_library(const AnchorTree& tree, const std::string& path) {
    LibraryFileStats stats;
    Writer w;
    w.buf.append("RBPX");
    w.u32(kProximityVersion);
    w.str(tree.descriptor());
    write_box(w, tree.root_box());
    const RBSpace& first = *tree.leaf(0).space;
    w.u32(static_cast<std::uint32_t>(first.q_a()));
    w.u32(static_cast<std::uint32_t>(first.q_f()));
    const ProximityConfig& cfg = tree.config();
    w.u32(static_cast<std::uint32_t>(cfg.n_basis));
    w.f64(cfg.eps);
    w.u64(cfg.train_size);
    w.u64(cfg.seed);
    w.u32(static_cast<std::uint32_t>(cfg.l_max));
    w.params(cfg.init_anchor.empty() ? tree.root().anchor : cfg.init_anchor);
    w.u32(static_cast<std::uint32_t>(tree.num_leaves()));

    // per-leaf anchor chains: both candidate anchors at every split along
    // the leaf's path, plus the side taken; emitted in depth-first leaf order
    struct ChainStep {
        const AnchorNode* parent;
        std::uint8_t side;
    };
    std::vector<ChainStep> chain;
    auto emit = [&](const AnchorNode* node, auto&& self) -> void {
        if (node->is_leaf()) {
            const std::size_t geom_start = w.buf.size();
            w.u32(static_cast<std::uint32_t>(chain.size()));
            for (const ChainStep& step : chain) {
                w.params(step.parent->child0->anchor);
                w.params(step.parent->child1->anchor);
                w.u8(step.side);
            }
            w.params(node->anchor);
            stats.geometry_bytes += w.buf.size() - geom_start;
            w.f64(node->eta_max);
            write_space(w, *node->space);
            return;
        }
        chain.push_back({node, 0});
        self(node->child0.get(), self);
        chain.back().side = 1;
        self(node->child1.get(), self);
        chain.pop_back();
    };
    emit(&tree.root(), emit);
    write_file_with_checksum(w, path);
    stats.total_bytes = w.buf.size();
    return stats;
}

AnchorTree load_proximity_library(const std::string& path) {
    const std::string bytes = read_file(path);
    const std::string payload = checked_payload(bytes);
    Reader r{payload};

    r.need(4);
    if (payload.substr(0, 4) != "RBPX") throw BadLibraryFile("bad magic (not an RBPX library)");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kProximityVersion) throw BadLibraryFile("unsupported library version " + std::to_string(version));

    const std::string descriptor = r.str();
    const ParamBox root_box = read_box(r);
    const int qa = static_cast<int>(r.u32());
    const int qf = static_cast<int>(r.u32());
    ProximityConfig cfg;
    cfg.n_basis = static_cast<int>(r.u32());
    cfg.eps = r.f64();
    cfg.train_size = r.u64();
    cfg.seed = r.u64();
    cfg.l_max = static_cast<int>(r.u32());
    cfg.init_anchor = r.params(root_box.dim());
    const std::uint32_t K = r.u32();
    if (K < 1) throw BadLibraryFile("library has no leaves");

    auto root = std::make_unique<AnchorNode>();
    root->anchor = cfg.init_anchor;
    root->level = 1;

    for (std::uint32_t k = 0; k < K; ++k) {
        const std::uint32_t chain_len = r.u32();
        AnchorNode* node = root.get();
        for (std::uint32_t i = 0; i < chain_len; ++i) {
            const Param a0 = r.params(root_box.dim());
            const Param a1 = r.params(root_box.dim());
            const std::uint8_t side = r.u8();
            if (!same_params(a0, node->anchor)) throw BadLibraryFile("anchor chain breaks child-0 inheritance");
            if (node->is_leaf()) {
                node->child0 = std::make_unique<AnchorNode>();
                node->child0->anchor = a0;
                node->child0->level = node->level + 1;
                node->child1 = std::make_unique<AnchorNode>();
                node->child1->anchor = a1;
                node->child1->level = node->level + 1;
            } else if (!same_params(a1, node->child1->anchor)) {
                throw BadLibraryFile("anchor chain mismatch across leaves");
            }
            node = side ? node->child1.get() : node->child0.get();
        }
        const Param leaf_anchor = r.params(root_box.dim());
        if (!same_params(leaf_anchor, node->anchor)) throw BadLibraryFile("leaf anchor mismatch");
        if (node->space) throw BadLibraryFile("duplicate leaf record");
        node->eta_max = r.f64();
        node->space = read_space(r, qa, qf);
    }
    if (r.pos != payload.size()) throw BadLibraryFile("trailing bytes after the last leaf record");

    AnchorTree tree(std::move(root), root_box, descriptor, cfg);
    if (tree.num_leaves() != static_cast<int>(K)) throw BadLibraryFile("leaf count mismatch after reconstruction");
    for (int k = 0; k < tree.num_leaves(); ++k) {
        if (!tree.leaf(k).space) throw BadLibraryFile("leaf without a stored RB space");
    }
    return tree;
}

}  // namespace rbhp
