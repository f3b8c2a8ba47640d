#pragma once

#include <algorithm>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/image.hpp"
#include "spix/label_codec.hpp"
#include "spix/png_io.hpp"

namespace spix {

// On-disk layout:
//   <root>/images/<id>.png            8-bit PNG, gray or RGB
//   <root>/gt/<id>/<k>.png|csv        k = 0..(#ground truths - 1)
namespace fs = std::filesystem;

inline std::vector<std::string> dataset_ids(const fs::path& root) {
    const fs::path images = root / "images";
    if (!fs::is_directory(images))
        throw std::runtime_error("dataset: missing images/ under " + root.string());
    std::vector<std::string> ids;
    for (const auto& e : fs::directory_iterator(images))
        if (e.is_regular_file() && e.path().extension() == ".png")
            ids.push_back(e.path().stem().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline DatasetEntry load_entry(const fs::path& root, const std::string& id) {
    DatasetEntry entry;
    entry.id = id;
    entry.image = decode_image_png(read_file_bytes(root / "images" / (id + ".png")));

    const fs::path gt_dir = root / "gt" / id;
    for (int k = 0;; ++k) {
        const fs::path png = gt_dir / (std::to_string(k) + ".png");
        const fs::path csv = gt_dir / (std::to_string(k) + ".csv");
        if (fs::exists(png))
            entry.ground_truths.push_back(decode_label_png(read_file_bytes(png)));
        else if (fs::exists(csv))
            entry.ground_truths.push_back(
                decode_label_map(read_file_bytes(csv), LabelFormat::csv));
        else
            break;
    }
    if (entry.ground_truths.empty())
        throw std::runtime_error("dataset: no ground truth for id " + id);
    entry.check();
    return entry;
}

inline std::vector<DatasetEntry> load_dataset(const fs::path& root) {
    std::vector<DatasetEntry> entries;
    for (const auto& id : dataset_ids(root)) entries.push_back(load_entry(root, id));
    return entries;
}

inline void write_entry(const fs::path& root, const DatasetEntry& entry) {
    entry.check();
    fs::create_directories(root / "images");
    fs::create_directories(root / "gt" / entry.id);
    write_file_atomic(root / "images" / (entry.id + ".png"), encode_image_png(entry.image));
    for (std::size_t k = 0; k < entry.ground_truths.size(); ++k)
        write_file_atomic(root / "gt" / entry.id / (std::to_string(k) + ".png"),
                          encode_label_png16(entry.ground_truths[k]));
}

}  // namespace spix
