#pragma once

#include <filesystem>
#include <string>

#include "camhealth/image.hpp"

namespace camhealth {

// Reads a binary PGM (P5) or PNG. Color PNGs are reduced to BT.601 luma.
// Throws DataError on unreadable, unsupported or empty files.
GrayImage load_gray(const std::filesystem::path& path);

// Writers quantize with clamp_quantize first. Files are written to a
// temporary sibling and renamed into place.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);

// Dispatches on the extension (.pgm or .png).
void save_gray(const GrayImage& img, const std::filesystem::path& path);

// BT.601 luma of an 8-bit RGB triple, in DN.
double bt601_luma(double r, double g, double b);

// Writes `contents` to `path` via temp file + rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace camhealth
