#pragma once

// JSON encodings of polynomials, skeins, diagram files and Heegaard data.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skl/diagram.hpp"
#include "skl/heegaard.hpp"
#include "skl/ring.hpp"
#include "skl/skein.hpp"

namespace skl {

using Json = nlohmann::ordered_json;

/// Malformed input; `where` is a JSON-pointer-like path to the field.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where), message_(what) {}
  const std::string& where() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

/// Integers that fit in int64 are numbers, larger ones decimal strings.
Json integer_to_json(const Integer& z);
Integer integer_from_json(const Json& j, const std::string& where);

Json rational_to_json(const Rational& q);  // [num, den]
Rational rational_from_json(const Json& j, const std::string& where);

/// [[exponent, re_num, re_den, im_num, im_den], ...] sorted by exponent.
Json laurent_to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const Json& j, const std::string& where = "coeff");

Json gauss_to_json(const GaussRat& c);  // [re_num, re_den, im_num, im_den]

Json multicurve_to_json(const SimpleMulticurve& mc);
Json skein_to_json(const Skein& x);
Json tensor_to_json(const TensorElem& x);

struct DiagramFile {
  struct Component {
    std::vector<Point> vertices;
    IVec2 wrap;
    int level = 0;
  };
  struct Override {
    std::size_t component = 0;
    std::size_t crossing_index = 0;
    bool over = true;  // the first passage along the component is the over strand
  };
  Surface surface = Surface::disk();
  std::optional<Point> puncture;  // as written in the file
  std::vector<Component> components;
  std::vector<Override> overrides;
};

DiagramFile diagram_file_from_json(const Json& j);
Json diagram_file_to_json(const DiagramFile& f);

/// Levels decide crossings between components; self-crossings at one level
/// need an override. Throws InputError for an override naming a missing
/// crossing, DiagramError for invalid geometry.
Diagram build_diagram(const DiagramFile& f);

HeegaardData heegaard_from_json(const Json& j);
Json heegaard_to_json(const HeegaardData& h);

Json read_json_file(const std::string& path);

}  // namespace skl
