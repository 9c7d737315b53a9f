#include "apsense/imagery/codec.hpp"

#include <cstring>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::imagery {
namespace {

// OpenCV is used for codecs only, so the RGB<->BGR swap is done here
// rather than pulling in imgproc.
void swap_rb(std::uint8_t* data, std::size_t pixels) {
  for (std::size_t i = 0; i < pixels; ++i)
    std::swap(data[i * 3], data[i * 3 + 2]);
}

cv::Mat to_bgr_mat(const ImageU8& img) {
  if (img.empty()) fail_input("cannot encode an empty image");
  if (img.c != 1 && img.c != 3)
    fail_input("only 1- or 3-channel images are supported");
  cv::Mat m(img.h, img.w, img.c == 3 ? CV_8UC3 : CV_8UC1);
  std::memcpy(m.data, img.v.data(), img.v.size());
  if (img.c == 3)
    swap_rb(m.data, static_cast<std::size_t>(img.h) * img.w);
  return m;
}

std::vector<std::uint8_t> encode(const ImageU8& img, const std::string& ext,
                                 const std::vector<int>& params) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(ext, to_bgr_mat(img), out, params))
    fail_io("image encoding failed for " + ext);
  return out;
}

}  // namespace

ImageU8 decode_image(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) fail_input("cannot decode an empty byte buffer");
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat m = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  if (m.empty()) fail_input("byte buffer is not a decodable image");
  if (m.depth() != CV_8U) m.convertTo(m, CV_8U);
  if (!m.isContinuous()) m = m.clone();

  const int channels = m.channels();
  if (channels != 1 && channels != 3 && channels != 4)
    fail_input("unsupported channel count in decoded image");

  ImageU8 img(m.rows, m.cols, channels == 1 ? 1 : 3);
  if (channels == 4) {
    const std::uint8_t* src = m.data;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m.rows) * m.cols; ++i) {
      img.v[i * 3 + 0] = src[i * 4 + 2];
      img.v[i * 3 + 1] = src[i * 4 + 1];
      img.v[i * 3 + 2] = src[i * 4 + 0];
    }
  } else {
    std::memcpy(img.v.data(), m.data, img.v.size());
    if (channels == 3)
      swap_rb(img.v.data(), static_cast<std::size_t>(img.h) * img.w);
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const ImageU8& img) {
  return encode(img, ".png", {});
}

std::vector<std::uint8_t> encode_jpeg(const ImageU8& img, int quality) {
  return encode(img, ".jpg", {cv::IMWRITE_JPEG_QUALITY, quality});
}

ImageU8 read_image(const std::filesystem::path& path) {
  return decode_image(apsense::fs::read_bytes(path));
}

void write_png(const std::filesystem::path& path, const ImageU8& img) {
  const std::vector<std::uint8_t> bytes = encode_png(img);
  apsense::fs::atomic_write(path, bytes);
}

}  // namespace apsense::imagery
