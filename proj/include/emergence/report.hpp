#pragma once

#include "emergence/abd.hpp"
#include "emergence/universal.hpp"

#include <json.hpp>

namespace emergence {

using Json = nlohmann::ordered_json;

Json to_json(const ValidationReport& r);
Json to_json(const Functor& f);
Json to_json(const PropertyFlags& p);
Json to_json(const MorphismVerdict& v);
Json to_json(const UniversalVerdict& v);
Json to_json(const NaturalTransformation& t);
Json to_json(const AbstractBlockDiagram& abd);
Json to_json(const SetFunctorCheck& c);
Json to_json(const InternalReport& r);
Json to_json(const ExtremalStatus& s);
Json summary_json(const Emergence& e);

// Indented "key: value" rendering of a report; lists become "- " items.
std::string render_text(const Json& j);

} // namespace emergence
