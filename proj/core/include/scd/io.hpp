#ifndef SCD_IO_HPP
#define SCD_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "scd/change.hpp"
#include "scd/mask.hpp"

namespace scd {

// Label rasters travel as binary PGM (P5) with maxval 65535: 16-bit
// big-endian samples, one per pixel, value = mask id (0 = background).
// Change maps use the same container with maxval 255 and the ChangeClass
// codes as sample values. Writers emit a fixed canonical header so equal
// inputs produce byte-identical files.

LabelRaster read_label_raster(const std::filesystem::path& path);
void write_label_raster(const LabelRaster& raster, const std::filesystem::path& path);

ChangeMap read_change_map(const std::filesystem::path& path);
void write_change_map(const ChangeMap& map, const std::filesystem::path& path);

/// Aligned reference/query frame lists with optional ground-truth change
/// maps. Stored as a JSON document {"ref": [...], "query": [...], "gt": [...]}
/// whose relative paths resolve against the manifest's own directory.
struct SequenceManifest {
    std::vector<std::string> ref;
    std::vector<std::string> query;
    std::vector<std::string> gt; // empty when absent
    std::filesystem::path base_dir;

    int frames() const { return static_cast<int>(ref.size()); }
    bool has_gt() const { return !gt.empty(); }

    std::filesystem::path ref_path(int frame) const;   // frame is 1-based
    std::filesystem::path query_path(int frame) const;
    std::filesystem::path gt_path(int frame) const;

    /// Throws if the lists are empty or have mismatched lengths.
    void validate() const;
};

SequenceManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const SequenceManifest& manifest, const std::filesystem::path& path);

} // namespace scd

#endif // SCD_IO_HPP
