#include <gtest/gtest.h>
#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "camhealth/error.hpp"
#include "camhealth/image.hpp"
#include "camhealth/image_io.hpp"

namespace fs = std::filesystem;
using namespace camhealth;

namespace {

fs::path temp_dir() {
  fs::path d = fs::temp_directory_path() / ("camhealth_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

// Minimal RGB/gray PNG writer through libpng, independent of save_png.
void write_png(const fs::path& p, int w, int h, int color_type, const std::vector<unsigned char>& px) {
  FILE* f = std::fopen(p.c_str(), "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  for (int y = 0; y < h; ++y) png_write_row(png, px.data() + static_cast<std::size_t>(y) * w * channels);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST(LoadGray, TwoByTwoPgm) {
  const fs::path p = temp_dir() / "tiny.pgm";
  write_bytes(p, std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4));
  const GrayImage img = load_gray(p);
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(std::vector<double>(img.pixels().begin(), img.pixels().end()), (std::vector<double>{0, 255, 128, 64}));
}

TEST(LoadGray, WhitePng) {
  const fs::path p = temp_dir() / "white.png";
  write_png(p, 8, 8, PNG_COLOR_TYPE_GRAY, std::vector<unsigned char>(64, 255));
  const GrayImage img = load_gray(p);
  ASSERT_EQ(img.size(), 64u);
  for (double v : img.pixels()) EXPECT_EQ(v, 255.0);
}

TEST(LoadGray, RedPixelLuma) {
  const fs::path p = temp_dir() / "red.png";
  write_png(p, 1, 1, PNG_COLOR_TYPE_RGB, {255, 0, 0});
  EXPECT_NEAR(load_gray(p)(0, 0), 76.245, 1e-9);
  EXPECT_NEAR(bt601_luma(255, 0, 0), 0.299 * 255, 1e-12);
}

TEST(LoadGray, Errors) {
  EXPECT_THROW(load_gray(temp_dir() / "missing.pgm"), DataError);
  const fs::path p = temp_dir() / "bad.pgm";
  write_bytes(p, "P2\n1 1\n255\n0\n");
  EXPECT_THROW(load_gray(p), DataError);
  const fs::path q = temp_dir() / "short.pgm";
  write_bytes(q, std::string("P5\n4 4\n255\n") + "ab");
  EXPECT_THROW(load_gray(q), DataError);
}

TEST(SaveGray, RoundTripQuantizes) {
  GrayImage img(5, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 5; ++x) img(x, y) = x * 50.2 - 10 + y;
  }
  for (const char* ext : {".pgm", ".png"}) {
    const fs::path p = temp_dir() / (std::string("rt") + ext);
    save_gray(img, p);
    EXPECT_EQ(load_gray(p), clamp_quantize(img)) << ext;
  }
}

TEST(WriteFileAtomic, LeavesNoTemporaries) {
  const fs::path d = temp_dir() / "atomic";
  fs::remove_all(d);
  fs::create_directories(d);
  write_file_atomic(d / "a.txt", "one");
  write_file_atomic(d / "a.txt", "two");
  std::ifstream in(d / "a.txt");
  std::string s;
  in >> s;
  EXPECT_EQ(s, "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(d), fs::directory_iterator()), 1);
}

TEST(TilePatches, ExactTiling) {
  const GrayImage img(256, 256);
  const auto p = tile_patches(img, 128, 128);
  ASSERT_EQ(p.size(), 4u);
  const int xy[4][2] = {{0, 0}, {128, 0}, {0, 128}, {128, 128}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(p[static_cast<std::size_t>(i)].x(), xy[i][0]);
    EXPECT_EQ(p[static_cast<std::size_t>(i)].y(), xy[i][1]);
  }
}

TEST(TilePatches, RemainderDroppedAndExactFit) {
  EXPECT_EQ(tile_patches(GrayImage(300, 300), 128, 128).size(), 4u);
  EXPECT_EQ(tile_patches(GrayImage(192, 192), 192, 1).size(), 1u);
  EXPECT_THROW(tile_patches(GrayImage(100, 300), 128, 128), InvalidArgument);
}

TEST(Patch, MustLieInsideParent) {
  const GrayImage img(10, 10);
  EXPECT_THROW(Patch(img, 5, 5, 6), InvalidArgument);
  EXPECT_NO_THROW(Patch(img, 4, 4, 6));
}

TEST(ClampQuantize, Examples) {
  GrayImage img(5, 1, std::vector<double>{-3.2, 260.0, 127.5, 128.5, 0.49});
  const GrayImage q = clamp_quantize(img);
  EXPECT_EQ(q(0, 0), 0.0);
  EXPECT_EQ(q(1, 0), 255.0);
  EXPECT_EQ(q(2, 0), 128.0);
  EXPECT_EQ(q(3, 0), 128.0);
  EXPECT_EQ(q(4, 0), 0.0);
}

TEST(GrayImage, RejectsEmptyShapes) {
  EXPECT_THROW(GrayImage(0, 3), InvalidArgument);
  EXPECT_THROW(GrayImage(2, 2, std::vector<double>(3)), InvalidArgument);
}
