#pragma once

#include "tlg/io.hpp"

#include <fstream>
#include <iterator>
#include <string>

namespace corpus {

inline std::string read_file(const std::string &name) {
  std::ifstream in(std::string(TLG_DATA_DIR) + "/" + name, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline tlg::StackyFan fan(const std::string &name) { return tlg::io::parse_fan_text(read_file(name + ".json")).fan; }

inline std::shared_ptr<const tlg::ExtendedStackyFan> extended(const std::string &name) {
  return std::make_shared<const tlg::ExtendedStackyFan>(fan(name));
}

inline std::shared_ptr<const tlg::ExtendedPicardData> picard_data(const std::string &name) {
  auto pic = tlg::extended_pl_and_pic(extended(name));
  return std::make_shared<const tlg::ExtendedPicardData>(tlg::choose_basis_p(pic));
}

inline const std::vector<std::string> &nef_corpus() {
  static const std::vector<std::string> names{"P1", "P2", "P112", "P1113", "F2"};
  return names;
}

} // namespace corpus
