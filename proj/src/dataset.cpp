// SPDX-License-Identifier: Apache-2.0

#include "msp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace msp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pose_scale_frac(PoseScale s) {
    switch (s) {
        case PoseScale::Small: return 0.70;
        case PoseScale::Medium: return 0.85;
        case PoseScale::Large: return 1.0;
    }
    return 1.0;
}

// Point-in-shape test in unit coordinates (shape fits the unit disk).
bool inside_shape(ShapeKind kind, double x, double y) {
    switch (kind) {
        case ShapeKind::Circle:
            return x * x + y * y <= 1.0;
        case ShapeKind::Square:
            return std::max(std::abs(x), std::abs(y)) <= 0.82;
        case ShapeKind::Triangle: {
            // Equilateral, apex up.
            if (y < -0.75 || y > 0.95) return false;
            const double half = (0.95 - y) * 0.62;
            return std::abs(x) <= half && y >= -0.75;
        }
        case ShapeKind::Star: {
            const double r = std::sqrt(x * x + y * y);
            if (r < 1e-12) return true;
            const double a = std::atan2(y, x);
            const double m = std::fmod(a * 5.0 / (2.0 * kPi) + 5.0, 1.0);
            const double w = std::abs(m - 0.5) * 2.0;  // 0 at spike center
            const double rmax = 0.42 + 0.58 * (1.0 - w);
            return r <= rmax;
        }
        case ShapeKind::Cross:
            return (std::abs(x) <= 0.32 && std::abs(y) <= 0.95) ||
                   (std::abs(y) <= 0.32 && std::abs(x) <= 0.95);
        case ShapeKind::Ring: {
            const double r2 = x * x + y * y;
            return r2 <= 1.0 && r2 >= 0.30;
        }
        case ShapeKind::Diamond:
            return std::abs(x) + std::abs(y) <= 1.05;
        case ShapeKind::Hexagon: {
            const double ax = std::abs(x), ay = std::abs(y);
            return ax <= 0.9 && (0.5 * ax + 0.8660254 * ay) <= 0.9;
        }
    }
    return false;
}

// Texture modulation in unit coordinates; returns brightness factor.
double texture_factor(TextureKind tex, double x, double y, double phase) {
    switch (tex) {
        case TextureKind::Solid:
            return 1.0;
        case TextureKind::Stripes: {
            const double band = std::sin((x + y) * 7.5 + phase);
            return band > 0.0 ? 1.0 : 0.55;
        }
        case TextureKind::Dots: {
            const double gx = std::fmod(std::abs(x * 3.4 + phase), 1.0) - 0.5;
            const double gy = std::fmod(std::abs(y * 3.4), 1.0) - 0.5;
            return (gx * gx + gy * gy < 0.085) ? 0.45 : 1.0;
        }
    }
    return 1.0;
}

struct SubjectColor {
    float r, g, b;
};

SubjectColor to_unit(const Rgb8& c) {
    return {u8_to_unit(c.r), u8_to_unit(c.g), u8_to_unit(c.b)};
}

Scene blank_scene(int canvas) {
    Scene s;
    s.image = TensorF({3, canvas, canvas}, 0.0f);
    s.label = MaskU8({canvas, canvas}, 0);
    return s;
}

// Nearest-neighbor affine warp of image+label in lockstep. Maps output pixel
// p to source p' = inv_scale * (p - center) + center - shift.
Scene warp(const Scene& in, double inv_scale, double cx, double cy, double dx, double dy) {
    const int H = in.height(), W = in.width();
    Scene out = blank_scene(W);
    const int64_t hw = int64_t(H) * W;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double sx = inv_scale * (x - dx - cx) + cx;
            const double sy = inv_scale * (y - dy - cy) + cy;
            const int ix = int(std::lround(sx));
            const int iy = int(std::lround(sy));
            if (ix < 0 || ix >= W || iy < 0 || iy >= H) continue;
            out.label.at2(y, x) = in.label.at2(iy, ix);
            for (int c = 0; c < 3; ++c)
                out.image[c * hw + int64_t(y) * W + x] = in.image[c * hw + int64_t(iy) * W + ix];
        }
    }
    for (int64_t i = 0; i < out.label.numel(); ++i)
        if (out.label[i]) out.subject_ids_present.insert(out.label[i]);
    return out;
}

int64_t count_label(const MaskU8& m) {
    int64_t n = 0;
    for (int64_t i = 0; i < m.numel(); ++i) n += (m[i] != 0);
    return n;
}

}  // namespace

const char* to_string(ShapeKind s) {
    switch (s) {
        case ShapeKind::Circle: return "circle";
        case ShapeKind::Square: return "square";
        case ShapeKind::Triangle: return "triangle";
        case ShapeKind::Star: return "star";
        case ShapeKind::Cross: return "cross";
        case ShapeKind::Ring: return "ring";
        case ShapeKind::Diamond: return "diamond";
        case ShapeKind::Hexagon: return "hexagon";
    }
    return "?";
}

const char* to_string(TextureKind t) {
    switch (t) {
        case TextureKind::Solid: return "solid";
        case TextureKind::Stripes: return "stripes";
        case TextureKind::Dots: return "dots";
    }
    return "?";
}

std::vector<SubjectSpec> default_subjects() {
    // Saturated, well-separated fill colors; backgrounds stay muted.
    return {
        {1, "sks-a", ShapeKind::Circle, {224, 49, 49}, TextureKind::Solid},
        {2, "sks-b", ShapeKind::Square, {34, 139, 230}, TextureKind::Stripes},
        {3, "sks-c", ShapeKind::Triangle, {47, 158, 68}, TextureKind::Solid},
        {4, "sks-d", ShapeKind::Star, {250, 176, 5}, TextureKind::Dots},
        {5, "sks-e", ShapeKind::Cross, {174, 62, 201}, TextureKind::Solid},
        {6, "sks-f", ShapeKind::Ring, {21, 170, 191}, TextureKind::Stripes},
        {7, "sks-g", ShapeKind::Diamond, {255, 107, 0}, TextureKind::Solid},
        {8, "sks-h", ShapeKind::Hexagon, {240, 101, 149}, TextureKind::Dots},
    };
}

void AugmentConfig::validate() const {
    if (!(zoom_min > 0.0 && zoom_min <= zoom_max && zoom_max <= 1.0))
        throw std::invalid_argument("AugmentConfig: need 0 < zoom_min <= zoom_max <= 1");
    if (!(crop_min > 0.0 && crop_min <= crop_max && crop_max <= 1.0))
        throw std::invalid_argument("AugmentConfig: need 0 < crop_min <= crop_max <= 1");
    if (!(crop_prob >= 0.0 && crop_prob <= 1.0))
        throw std::invalid_argument("AugmentConfig: crop_prob must be in [0,1]");
    if (!(translate_frac >= 0.0 && translate_frac <= 1.0))
        throw std::invalid_argument("AugmentConfig: translate_frac must be in [0,1]");
    if (canvas < 8) throw std::invalid_argument("AugmentConfig: canvas too small");
    if (num_backgrounds < 1) throw std::invalid_argument("AugmentConfig: need >= 1 background");
}

Scene render_subject(const SubjectSpec& spec, const Pose& pose, int canvas, Rng& rng) {
    const double radius = 0.5 * 0.95 * pose_scale_frac(pose.scale) * canvas;
    const double cx = pose.cx * canvas, cy = pose.cy * canvas;
    if (cx - radius < -0.5 || cy - radius < -0.5 || cx + radius > canvas - 0.5 ||
        cy + radius > canvas - 0.5)
        throw std::out_of_range("render_subject: subject out of canvas bounds");

    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const double ca = std::cos(angle), sa = std::sin(angle);
    const SubjectColor col = to_unit(spec.fill_color);

    Scene s = blank_scene(canvas);
    const int64_t hw = int64_t(canvas) * canvas;
    for (int y = 0; y < canvas; ++y) {
        for (int x = 0; x < canvas; ++x) {
            // 2x2 supersample for coverage.
            int hits = 0;
            double uX = 0.0, uY = 0.0;
            for (int sy = 0; sy < 2; ++sy) {
                for (int sx = 0; sx < 2; ++sx) {
                    const double px = x + 0.25 + 0.5 * sx - cx;
                    const double py = y + 0.25 + 0.5 * sy - cy;
                    const double rx = (ca * px + sa * py) / radius;
                    const double ry = (-sa * px + ca * py) / radius;
                    if (inside_shape(spec.shape, rx, ry)) {
                        ++hits;
                        uX = rx;
                        uY = ry;
                    }
                }
            }
            if (hits < 2) continue;
            const double f = texture_factor(spec.texture, uX, uY, phase);
            s.label.at2(y, x) = uint8_t(spec.subject_id);
            s.image[0 * hw + int64_t(y) * canvas + x] = float(col.r * f);
            s.image[1 * hw + int64_t(y) * canvas + x] = float(col.g * f);
            s.image[2 * hw + int64_t(y) * canvas + x] = float(col.b * f);
        }
    }
    const int64_t labeled = count_label(s.label);
    if (labeled * 100 < hw) throw std::runtime_error("render_subject: subject covers < 1% of canvas");
    s.subject_ids_present.insert(spec.subject_id);
    return s;
}

Scene augment(const Scene& scene, const AugmentConfig& cfg, Rng& rng) {
    cfg.validate();
    const int H = scene.height(), W = scene.width();

    // Subject centroid anchors the zoom.
    double mx = W / 2.0, my = H / 2.0;
    int64_t n = 0;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            if (scene.label.at2(y, x)) {
                mx += x;
                my += y;
                ++n;
            }
    if (n > 0) {
        mx = (mx - W / 2.0) / double(n);
        my = (my - H / 2.0) / double(n);
    }

    const double zoom = rng.uniform(cfg.zoom_min, cfg.zoom_max);
    Scene zoomed = (zoom == 1.0) ? scene : warp(scene, 1.0 / zoom, mx, my, 0.0, 0.0);
    if (zoom == 1.0) zoomed.subject_ids_present = scene.subject_ids_present;

    // Subject crop: erase outside a centered sub-box of the subject bbox.
    if (rng.bernoulli(cfg.crop_prob)) {
        const double f = rng.uniform(cfg.crop_min, cfg.crop_max);
        int x0 = W, x1 = -1, y0 = H, y1 = -1;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (zoomed.label.at2(y, x)) {
                    x0 = std::min(x0, x);
                    x1 = std::max(x1, x);
                    y0 = std::min(y0, y);
                    y1 = std::max(y1, y);
                }
        if (x1 >= x0) {
            const double bw = (x1 - x0 + 1) * f / 2.0, bh = (y1 - y0 + 1) * f / 2.0;
            const double bcx = (x0 + x1) / 2.0, bcy = (y0 + y1) / 2.0;
            const int64_t hw = int64_t(H) * W;
            for (int y = 0; y < H; ++y)
                for (int x = 0; x < W; ++x)
                    if (zoomed.label.at2(y, x) &&
                        (std::abs(x - bcx) > bw || std::abs(y - bcy) > bh)) {
                        zoomed.label.at2(y, x) = 0;
                        for (int c = 0; c < 3; ++c) zoomed.image[c * hw + int64_t(y) * W + x] = 0.0f;
                    }
        }
    }

    // Translation keeping at least half the subject pixels on canvas.
    const int64_t before = count_label(zoomed.label);
    double dx = 0.0, dy = 0.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
        const double tx = rng.uniform(-cfg.translate_frac * W, cfg.translate_frac * W);
        const double ty = rng.uniform(-cfg.translate_frac * H, cfg.translate_frac * H);
        int64_t kept = 0;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (zoomed.label.at2(y, x)) {
                    const int nx2 = int(std::lround(x + tx)), ny2 = int(std::lround(y + ty));
                    if (nx2 >= 0 && nx2 < W && ny2 >= 0 && ny2 < H) ++kept;
                }
        if (before == 0 || kept * 2 >= before) {
            dx = tx;
            dy = ty;
            break;
        }
    }
    if (dx == 0.0 && dy == 0.0) {
        zoomed.subject_ids_present.clear();
        for (int64_t i = 0; i < zoomed.label.numel(); ++i)
            if (zoomed.label[i]) zoomed.subject_ids_present.insert(zoomed.label[i]);
        return zoomed;
    }
    return warp(zoomed, 1.0, 0.0, 0.0, dx, dy);
}

Scene composite_background(const Scene& scene, const TensorF& background) {
    if (background.ndim() != 3 || background.dim(0) != 3 || background.dim(1) != scene.height() ||
        background.dim(2) != scene.width())
        throw std::invalid_argument("composite_background: size mismatch");
    Scene out = scene;
    const int64_t hw = int64_t(scene.height()) * scene.width();
    for (int64_t p = 0; p < hw; ++p)
        if (out.label[p] == 0)
            for (int64_t c = 0; c < 3; ++c) out.image[c * hw + p] = background[c * hw + p];
    return out;
}

TensorF make_background(int index, int canvas, uint64_t seed) {
    Rng rng(derive_seed(seed, {0xB6u, uint64_t(index)}));
    TensorF bg({3, canvas, canvas});
    const int64_t hw = int64_t(canvas) * canvas;

    // Muted two-color palette so backgrounds stay away from subject hues.
    const float base[3] = {float(rng.uniform(-0.55, 0.15)), float(rng.uniform(-0.55, 0.15)),
                           float(rng.uniform(-0.55, 0.15))};
    const float alt[3] = {float(base[0] + rng.uniform(0.1, 0.45)),
                          float(base[1] + rng.uniform(0.1, 0.45)),
                          float(base[2] + rng.uniform(0.1, 0.45))};

    const int kind = index % 5;
    switch (kind) {
        case 0: {  // linear gradient, random direction
            const double a = rng.uniform(0.0, 2.0 * kPi);
            const double gx = std::cos(a), gy = std::sin(a);
            for (int y = 0; y < canvas; ++y)
                for (int x = 0; x < canvas; ++x) {
                    const double t = ((gx * x + gy * y) / canvas + 1.0) / 2.0;
                    for (int c = 0; c < 3; ++c)
                        bg[c * hw + int64_t(y) * canvas + x] =
                            float(base[c] + (alt[c] - base[c]) * t);
                }
            break;
        }
        case 1: {  // radial
            const double cx = rng.uniform(0.2, 0.8) * canvas, cy = rng.uniform(0.2, 0.8) * canvas;
            for (int y = 0; y < canvas; ++y)
                for (int x = 0; x < canvas; ++x) {
                    const double r = std::hypot(x - cx, y - cy) / canvas;
                    const double t = std::min(1.0, r * 1.6);
                    for (int c = 0; c < 3; ++c)
                        bg[c * hw + int64_t(y) * canvas + x] =
                            float(base[c] + (alt[c] - base[c]) * t);
                }
            break;
        }
        case 2: {  // checkerboard
            const int cell = 4 + 4 * int(rng.uniform_int(0, 2));
            for (int y = 0; y < canvas; ++y)
                for (int x = 0; x < canvas; ++x) {
                    const bool odd = ((x / cell) + (y / cell)) & 1;
                    for (int c = 0; c < 3; ++c)
                        bg[c * hw + int64_t(y) * canvas + x] = odd ? alt[c] : base[c];
                }
            break;
        }
        case 3: {  // smooth value noise (bilinear-upsampled coarse grid)
            const int g = 5;
            std::vector<float> grid(size_t(g * g * 3));
            for (auto& v : grid) v = float(rng.uniform(0.0, 1.0));
            for (int y = 0; y < canvas; ++y)
                for (int x = 0; x < canvas; ++x) {
                    const double fx = double(x) / (canvas - 1) * (g - 1);
                    const double fy = double(y) / (canvas - 1) * (g - 1);
                    const int x0 = std::min(int(fx), g - 2), y0 = std::min(int(fy), g - 2);
                    const double ax = fx - x0, ay = fy - y0;
                    for (int c = 0; c < 3; ++c) {
                        const double v00 = grid[size_t((y0 * g + x0) * 3 + c)];
                        const double v01 = grid[size_t((y0 * g + x0 + 1) * 3 + c)];
                        const double v10 = grid[size_t(((y0 + 1) * g + x0) * 3 + c)];
                        const double v11 = grid[size_t(((y0 + 1) * g + x0 + 1) * 3 + c)];
                        const double v = (v00 * (1 - ax) + v01 * ax) * (1 - ay) +
                                         (v10 * (1 - ax) + v11 * ax) * ay;
                        bg[c * hw + int64_t(y) * canvas + x] =
                            float(base[c] + (alt[c] - base[c]) * v);
                    }
                }
            break;
        }
        default: {  // horizontal stripes
            const int period = 6 + 2 * int(rng.uniform_int(0, 3));
            for (int y = 0; y < canvas; ++y)
                for (int x = 0; x < canvas; ++x) {
                    const bool odd = (y / period) & 1;
                    for (int c = 0; c < 3; ++c)
                        bg[c * hw + int64_t(y) * canvas + x] = odd ? alt[c] : base[c];
                }
            break;
        }
    }
    for (int64_t i = 0; i < bg.numel(); ++i) bg[i] = std::clamp(bg[i], -0.9f, 0.9f);
    return bg;
}

std::vector<Rgb8> label_palette(const std::vector<SubjectSpec>& specs) {
    std::vector<Rgb8> pal(specs.size() + 1);
    pal[0] = {0, 0, 0};
    for (const auto& s : specs) pal.at(size_t(s.subject_id)) = s.fill_color;
    return pal;
}

namespace {

const char* split_name(int s) { return s == 0 ? "train" : (s == 1 ? "val" : "test"); }

uint64_t fnv1a(const void* data, size_t n, uint64_t h = 1469598103934665603ULL) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t hash_file(const std::string& path, uint64_t h) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("hash_file: cannot open " + path);
    char buf[4096];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) h = fnv1a(buf, size_t(f.gcount()), h);
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Rgb8 parse_color(const std::string& hex) {
    if (hex.size() != 6) throw std::runtime_error("bad color: " + hex);
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::runtime_error("bad hex digit");
    };
    return {uint8_t(nib(hex[0]) * 16 + nib(hex[1])), uint8_t(nib(hex[2]) * 16 + nib(hex[3])),
            uint8_t(nib(hex[4]) * 16 + nib(hex[5]))};
}

std::string color_hex(const Rgb8& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

ShapeKind parse_shape(const std::string& s) {
    for (int i = 0; i < 8; ++i)
        if (s == to_string(ShapeKind(i))) return ShapeKind(i);
    throw std::runtime_error("unknown shape: " + s);
}

TextureKind parse_texture(const std::string& s) {
    for (int i = 0; i < 3; ++i)
        if (s == to_string(TextureKind(i))) return TextureKind(i);
    throw std::runtime_error("unknown texture: " + s);
}

}  // namespace

CorpusManifest build_corpus(const std::vector<SubjectSpec>& specs, const CorpusSizes& sizes,
                            const AugmentConfig& cfg, uint64_t seed, const std::string& out_dir,
                            uint64_t config_hash) {
    if (specs.empty()) throw std::invalid_argument("build_corpus: empty subject list");
    cfg.validate();
    if (sizes.train < 1 || sizes.val < 1 || sizes.test < 1)
        throw std::invalid_argument("build_corpus: split sizes must be positive");

    const auto palette = label_palette(specs);
    std::vector<TensorF> backgrounds;
    backgrounds.reserve(size_t(cfg.num_backgrounds));
    for (int i = 0; i < cfg.num_backgrounds; ++i)
        backgrounds.push_back(make_background(i, cfg.canvas, seed));

    CorpusManifest man;
    man.seed = seed;
    man.canvas = cfg.canvas;
    man.subjects = specs;
    man.sizes = sizes;
    man.config_hash = config_hash;

    uint64_t content = 1469598103934665603ULL;
    const int counts[3] = {sizes.train, sizes.val, sizes.test};
    for (int split = 0; split < 3; ++split) {
        const fs::path img_dir = fs::path(out_dir) / "images" / split_name(split);
        const fs::path lab_dir = fs::path(out_dir) / "labels" / split_name(split);
        fs::create_directories(img_dir);
        fs::create_directories(lab_dir);
        for (int i = 0; i < counts[split]; ++i) {
            // Per-record stream: parallel and serial builds agree.
            Rng rng(derive_seed(seed, {uint64_t(split) + 1, uint64_t(i)}));
            const SubjectSpec& spec = specs[size_t(i) % specs.size()];
            Pose pose;
            pose.scale = PoseScale(rng.uniform_int(0, 2));
            pose.cx = 0.5 + rng.uniform(-0.08, 0.08);
            pose.cy = 0.5 + rng.uniform(-0.08, 0.08);
            Scene scene = render_subject(spec, pose, cfg.canvas, rng);
            scene = augment(scene, cfg, rng);
            scene = composite_background(
                scene, backgrounds[size_t(rng.uniform_int(0, cfg.num_backgrounds - 1))]);

            char img_name[32], lab_name[32];
            std::snprintf(img_name, sizeof(img_name), "img_%05d.png", i);
            std::snprintf(lab_name, sizeof(lab_name), "lab_%05d.png", i);
            const std::string img_path = (img_dir / img_name).string();
            const std::string lab_path = (lab_dir / lab_name).string();
            write_png_rgb(img_path, tensor_to_rgb(scene.image));

            IndexedImage lab;
            lab.width = cfg.canvas;
            lab.height = cfg.canvas;
            lab.palette = palette;
            lab.indices.assign(scene.label.data(), scene.label.data() + scene.label.numel());
            write_png_indexed(lab_path, lab);

            content = hash_file(img_path, content);
            content = hash_file(lab_path, content);
        }
    }
    man.content_hash = content;

    std::ofstream mf(fs::path(out_dir) / "manifest.txt");
    mf << "msp-corpus-version = 1\n";
    mf << "seed = " << seed << "\n";
    mf << "canvas = " << cfg.canvas << "\n";
    mf << "num_subjects = " << specs.size() << "\n";
    mf << "train = " << sizes.train << "\n";
    mf << "val = " << sizes.val << "\n";
    mf << "test = " << sizes.test << "\n";
    for (const auto& s : specs)
        mf << "subject = " << s.subject_id << " token=" << s.token_text
           << " shape=" << to_string(s.shape) << " color=" << color_hex(s.fill_color)
           << " texture=" << to_string(s.texture) << "\n";
    mf << "config_hash = " << hex64(config_hash) << "\n";
    mf << "content_hash = " << hex64(content) << "\n";
    if (!mf) throw std::runtime_error("build_corpus: manifest write failed");
    return man;
}

CorpusManifest read_manifest(const std::string& corpus_dir) {
    std::ifstream mf(fs::path(corpus_dir) / "manifest.txt");
    if (!mf) throw std::runtime_error("read_manifest: missing manifest in " + corpus_dir);
    CorpusManifest man;
    std::string line;
    while (std::getline(mf, line)) {
        std::istringstream ss(line);
        std::string key, eq;
        ss >> key >> eq;
        if (key == "seed")
            ss >> man.seed;
        else if (key == "canvas")
            ss >> man.canvas;
        else if (key == "train")
            ss >> man.sizes.train;
        else if (key == "val")
            ss >> man.sizes.val;
        else if (key == "test")
            ss >> man.sizes.test;
        else if (key == "config_hash") {
            std::string hex;
            ss >> hex;
            man.config_hash = std::stoull(hex, nullptr, 16);
        } else if (key == "content_hash") {
            std::string hex;
            ss >> hex;
            man.content_hash = std::stoull(hex, nullptr, 16);
        } else if (key == "subject") {
            SubjectSpec s;
            ss >> s.subject_id;
            std::string kv;
            while (ss >> kv) {
                const auto pos = kv.find('=');
                if (pos == std::string::npos) continue;
                const std::string k = kv.substr(0, pos), v = kv.substr(pos + 1);
                if (k == "token") s.token_text = v;
                else if (k == "shape") s.shape = parse_shape(v);
                else if (k == "color") s.fill_color = parse_color(v);
                else if (k == "texture") s.texture = parse_texture(v);
            }
            man.subjects.push_back(s);
        }
    }
    return man;
}

LoadedCorpus load_corpus(const std::string& corpus_dir) {
    LoadedCorpus corpus;
    corpus.manifest = read_manifest(corpus_dir);
    const int counts[3] = {corpus.manifest.sizes.train, corpus.manifest.sizes.val,
                           corpus.manifest.sizes.test};
    LoadedSplit* splits[3] = {&corpus.train, &corpus.val, &corpus.test};
    const size_t S = corpus.manifest.subjects.size();
    for (int split = 0; split < 3; ++split) {
        splits[split]->records.reserve(size_t(counts[split]));
        for (int i = 0; i < counts[split]; ++i) {
            char img_name[32], lab_name[32];
            std::snprintf(img_name, sizeof(img_name), "img_%05d.png", i);
            std::snprintf(lab_name, sizeof(lab_name), "lab_%05d.png", i);
            LoadedRecord rec;
            rec.image = rgb_to_tensor(read_png_rgb(
                (fs::path(corpus_dir) / "images" / split_name(split) / img_name).string()));
            const IndexedImage lab = read_png_indexed(
                (fs::path(corpus_dir) / "labels" / split_name(split) / lab_name).string());
            rec.label = MaskU8({lab.height, lab.width});
            std::copy(lab.indices.begin(), lab.indices.end(), rec.label.data());
            rec.subject_id = corpus.manifest.subjects[size_t(i) % S].subject_id;
            splits[split]->records.push_back(std::move(rec));
        }
    }
    return corpus;
}

}  // namespace msp
