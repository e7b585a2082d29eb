#pragma once

// Shared test fixtures. The tool document below follows the hub's tool-doc
// schema exactly (name / tool_description / api_list with per-api name, url,
// description, method, required_parameters, optional_parameters, tool_name,
// category_name).

namespace fixtures {

inline const char* kFakerToolDoc = R"json({
    "tool_description": "EntreAPI Faker is used to dynamically create mock, demo, test and sample data for your application",
    "name": "EntreAPI Faker",
    "api_list": [
        {
            "name": "Longitute",
            "url": "https://entreapi-faker.p.rapidapi.com/address/longitude",
            "description": "Generate a random longitude.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "max", "type": "NUMBER", "description": "Maximum value for latitude.", "default": ""},
                {"name": "min", "type": "NUMBER", "description": "Minimum value for latitude.", "default": ""},
                {"name": "precision", "type": "NUMBER", "description": "Precision for latitude.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Boolean",
            "url": "https://entreapi-faker.p.rapidapi.com/datatype/boolean",
            "description": "Randomly generate a boolean value.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Past",
            "url": "https://entreapi-faker.p.rapidapi.com/date/past",
            "description": "Randomly generate a date value in the past.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "refDate", "type": "STRING", "description": "Starting reference date", "default": ""},
                {"name": "years", "type": "NUMBER", "description": "Number of years for the range of dates.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Image Url",
            "url": "https://entreapi-faker.p.rapidapi.com/image/imageUrl",
            "description": "Randomly generate an image URL.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "width", "type": "NUMBER", "description": "Width of the image. Default is 640.", "default": ""},
                {"name": "height", "type": "NUMBER", "description": "Height of the image. Default is 480.", "default": ""},
                {"name": "useRandomize", "type": "BOOLEAN", "description": "Add a random number parameter to the returned URL.", "default": ""},
                {"name": "category", "type": "STRING", "description": "The category for the image.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Sentence",
            "url": "https://entreapi-faker.p.rapidapi.com/lorem/sentence",
            "description": "Randomly generate a sentence of Lorem Ipsum.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "wordCount", "type": "NUMBER", "description": "Number of words in the sentence.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Gender",
            "url": "https://entreapi-faker.p.rapidapi.com/name/gender",
            "description": "Randomly select a gender.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "useBinary", "type": "BOOLEAN", "description": "Use binary genders only.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Prefix",
            "url": "https://entreapi-faker.p.rapidapi.com/name/prefix",
            "description": "Randomly generate a prefix (e.g., Mr., Mrs., etc.)",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "gender", "type": "STRING", "description": "Optional gender.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Array Element",
            "url": "https://entreapi-faker.p.rapidapi.com/random/arrayElement",
            "description": "Randomly select an array element.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "array", "type": "ARRAY", "description": "The list of elements to choose from.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "Number Value",
            "url": "https://entreapi-faker.p.rapidapi.com/random/number",
            "description": "Randomly generate a number value.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [
                {"name": "min", "type": "NUMBER", "description": "Minimum value.", "default": ""},
                {"name": "max", "type": "NUMBER", "description": "Maximum value.", "default": ""},
                {"name": "precision", "type": "NUMBER", "description": "Precision of the number.", "default": ""}
            ],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        },
        {
            "name": "URL",
            "url": "https://entreapi-faker.p.rapidapi.com/internet/url",
            "description": "Randomly generate a URL.",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [],
            "tool_name": "EntreAPI Faker",
            "category_name": "Data"
        }
    ]
})json";

}  // namespace fixtures
