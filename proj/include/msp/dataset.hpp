// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "msp/image.hpp"
#include "msp/rng.hpp"
#include "msp/tensor.hpp"

namespace msp {

enum class ShapeKind { Circle, Square, Triangle, Star, Cross, Ring, Diamond, Hexagon };
enum class TextureKind { Solid, Stripes, Dots };
enum class PoseScale { Small, Medium, Large };

const char* to_string(ShapeKind s);
const char* to_string(TextureKind t);

struct SubjectSpec {
    int subject_id = 0;            // 1..S
    std::string token_text;        // e.g. "sks-a"
    ShapeKind shape = ShapeKind::Circle;
    Rgb8 fill_color;
    TextureKind texture = TextureKind::Solid;
};

/// The stock 8-subject roster; every (shape, color, texture) triple distinct.
std::vector<SubjectSpec> default_subjects();

struct AugmentConfig {
    double zoom_min = 0.4, zoom_max = 0.5;
    double crop_min = 0.65, crop_max = 0.95;
    double crop_prob = 0.1;
    double translate_frac = 0.5;   // max |shift| as a canvas fraction
    int canvas = 64;
    int num_backgrounds = 20;

    void validate() const;
};

struct Scene {
    TensorF image;                 // 3 x H x W in [-1, 1]
    MaskU8 label;                  // H x W, 0 = background, else subject_id
    std::set<int> subject_ids_present;

    int height() const { return int(label.dim(0)); }
    int width() const { return int(label.dim(1)); }
};

struct Pose {
    PoseScale scale = PoseScale::Large;
    double cx = 0.5, cy = 0.5;     // center as canvas fraction
};

/// Single subject on a blank (mid-gray) canvas. Orientation is drawn from rng.
Scene render_subject(const SubjectSpec& spec, const Pose& pose, int canvas, Rng& rng);

/// Zoom, optional subject crop, random translation; image and label move in
/// lockstep. Degenerate draws are retried up to 10 times, then identity.
Scene augment(const Scene& scene, const AugmentConfig& cfg, Rng& rng);

/// Replaces pixels with label == 0; subject pixels and label are untouched.
Scene composite_background(const Scene& scene, const TensorF& background);

/// Procedural background scene (gradients, checkers, smooth noise).
TensorF make_background(int index, int canvas, uint64_t seed);

struct CorpusSizes {
    int train = 1064, val = 194, test = 150;
};

struct CorpusRecord {
    std::string image_path;
    std::string label_path;
    int subject_id = 0;
};

struct CorpusManifest {
    uint64_t seed = 0;
    int canvas = 64;
    std::vector<SubjectSpec> subjects;
    CorpusSizes sizes;
    uint64_t config_hash = 0;
    uint64_t content_hash = 0;
};

/// Generates the corpus on disk (images/, labels/ per split + manifest.txt).
CorpusManifest build_corpus(const std::vector<SubjectSpec>& specs, const CorpusSizes& sizes,
                            const AugmentConfig& cfg, uint64_t seed, const std::string& out_dir,
                            uint64_t config_hash = 0);

struct LoadedRecord {
    TensorF image;
    MaskU8 label;
    int subject_id = 0;
};

struct LoadedSplit {
    std::vector<LoadedRecord> records;
};

struct LoadedCorpus {
    CorpusManifest manifest;
    LoadedSplit train, val, test;
};

CorpusManifest read_manifest(const std::string& corpus_dir);
LoadedCorpus load_corpus(const std::string& corpus_dir);

/// Palette used for label PNGs: entry k is the display color of class k.
std::vector<Rgb8> label_palette(const std::vector<SubjectSpec>& specs);

}  // namespace msp
