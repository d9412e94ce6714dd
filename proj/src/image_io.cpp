#include "warpgraph/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "binary_io.hpp"

namespace warpgraph {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadCtx() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteCtx() { png_destroy_write_struct(&png, &info); }
};

void open_png_reader(PngReadCtx& ctx, std::FILE* f, const std::string& path) {
  png_byte header[8];
  if (std::fread(header, 1, 8, f) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw FormatError("not a PNG file: " + path);
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png_create_info_struct failed");
  png_init_io(ctx.png, f);
  png_set_sig_bytes(ctx.png, 8);
}

}  // namespace

ColorImage load_color_png(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open PNG: " + path);
  PngReadCtx ctx;
  open_png_reader(ctx, f.get(), path);
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("corrupt PNG: " + path);

  png_read_info(ctx.png, ctx.info);
  const int w = int(png_get_image_width(ctx.png, ctx.info));
  const int h = int(png_get_image_height(ctx.png, ctx.info));
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);

  // Normalize every color layout to 8-bit RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(ctx.png);
  if (bit_depth == 16) png_set_strip_16(ctx.png);
  if (bit_depth < 8) png_set_packing(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  if (png_get_rowbytes(ctx.png, ctx.info) != static_cast<size_t>(w) * 3)
    throw FormatError("unexpected PNG row layout: " + path);

  ColorImage img(w, h, 3);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = reinterpret_cast<png_bytep>(&img.at(0, y, 0));
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return img;
}

void save_color_png(const ColorImage& img, const std::string& path) {
  if (img.c != 3) throw FormatError("save_color_png: image must have 3 channels");
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open PNG for writing: " + path);
  PngWriteCtx ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("PNG write failed: " + path);

  png_init_io(ctx.png, f.get());
  png_set_IHDR(ctx.png, ctx.info, img.w, img.h, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  std::vector<png_const_bytep> rows(img.h);
  for (int y = 0; y < img.h; ++y)
    rows[y] = reinterpret_cast<png_const_bytep>(&img.at(0, y, 0));
  for (int y = 0; y < img.h; ++y)
    png_write_row(ctx.png, const_cast<png_bytep>(rows[y]));
  png_write_end(ctx.png, nullptr);
}

Grid<std::uint16_t> load_depth_png_raw(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open PNG: " + path);
  PngReadCtx ctx;
  open_png_reader(ctx, f.get(), path);
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("corrupt PNG: " + path);

  png_read_info(ctx.png, ctx.info);
  const int w = int(png_get_image_width(ctx.png, ctx.info));
  const int h = int(png_get_image_height(ctx.png, ctx.info));
  if (png_get_bit_depth(ctx.png, ctx.info) != 16 ||
      png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
    throw FormatError("depth PNG must be 16-bit grayscale: " + path);

  // PNG stores 16-bit samples big-endian; swap to host order.
  png_set_swap(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  Grid<std::uint16_t> img(w, h, 1);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = reinterpret_cast<png_bytep>(&img.at(0, y));
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return img;
}

void save_depth_png_raw(const Grid<std::uint16_t>& img, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open PNG for writing: " + path);
  PngWriteCtx ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("PNG write failed: " + path);

  png_init_io(ctx.png, f.get());
  png_set_IHDR(ctx.png, ctx.info, img.w, img.h, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_set_swap(ctx.png);
  for (int y = 0; y < img.h; ++y)
    png_write_row(ctx.png,
                  const_cast<png_bytep>(reinterpret_cast<png_const_bytep>(&img.at(0, y))));
  png_write_end(ctx.png, nullptr);
}

DepthImage load_depth_png(const std::string& path, double depth_scale) {
  if (!(depth_scale > 0.0)) throw FormatError("depth_scale must be positive");
  Grid<std::uint16_t> raw = load_depth_png_raw(path);
  DepthImage depth(raw.w, raw.h, 1);
  for (size_t i = 0; i < raw.data.size(); ++i)
    depth.data[i] = raw.data[i] * depth_scale;
  return depth;
}

void save_depth_png(const DepthImage& depth, double depth_scale,
                    const std::string& path) {
  Grid<std::uint16_t> raw(depth.w, depth.h, 1);
  for (size_t i = 0; i < depth.data.size(); ++i) {
    double units = std::round(depth.data[i] / depth_scale);
    if (units < 0.0) units = 0.0;
    if (units > 65535.0) units = 65535.0;
    raw.data[i] = static_cast<std::uint16_t>(units);
  }
  save_depth_png_raw(raw, path);
}

Frame load_frame(const std::string& color_path, const std::string& depth_path,
                 const std::string& intrinsics_path, const std::string& id) {
  Frame frame;
  frame.intrinsics = load_intrinsics(intrinsics_path);
  frame.color = load_color_png(color_path);
  frame.depth = load_depth_png(depth_path, frame.intrinsics.depth_scale);
  frame.id = id;
  frame.validate();
  return frame;
}

FeatureMap load_feature_map(const std::string& path) {
  auto buf = detail::read_file(path);
  detail::Reader r(buf, path);
  r.expect_magic("NRFM");
  const std::uint32_t w = r.u32();
  const std::uint32_t h = r.u32();
  const std::uint32_t c = r.u32();
  if (w == 0 || h == 0 || c == 0)
    throw FormatError(path + ": zero feature-map dimension");
  const size_t count = size_t(w) * h * c;
  if (r.remaining() != count * 4)
    throw FormatError(path + ": payload length does not match header dims");
  FeatureMap fm(int(w), int(h), int(c));
  for (size_t i = 0; i < count; ++i) fm.grid.data[i] = double(r.f32());
  r.expect_end();
  return fm;
}

void save_feature_map(const FeatureMap& fm, const std::string& path) {
  detail::Writer wtr;
  wtr.magic("NRFM");
  wtr.u32(std::uint32_t(fm.w()));
  wtr.u32(std::uint32_t(fm.h()));
  wtr.u32(std::uint32_t(fm.channels()));
  for (double v : fm.grid.data) wtr.f32(float(v));
  wtr.write_to(path);
}

}  // namespace warpgraph
