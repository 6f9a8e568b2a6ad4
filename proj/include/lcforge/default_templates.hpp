// Generated by scripts/embed_templates.py from templates/*.txt. Do not edit.
#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace lcforge::detail {

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 12> kDefaultTemplates = {{
    {"chat_turn", R"lcft(### Turn Generation
Conversation type: {{chat_type}}
Conversation so far:
{{history}}

Next speaker: "{{speaker_name}}" ({{speaker_role}})
{{turn_directives}}
Length requirement: between {{min_words}} and {{max_words}} words.

Write only the next message for "{{speaker_name}}". Do not write lines for any other participant and do not add labels, notes, or commentary.
)lcft"},
    {"create_conversation", R"lcft(You are a skilled AI assistant. Generate a natural, detailed, and realistic conversation between two or three participants based on the given scenario in a specific country.

Conversation Flow: 
    1. The user first interacts with assistant-1 (L1 support).
    2. After a few exchanges, assistant-1 hands off the conversation to assistant-2 (L2 support).
    3. When the handoff happens:
        * The user may re-explain the issue OR
        * Assistant-2 may continue seamlessly, assuming they have chat history.
    4. The issue may either be resolved or remain unsolved after assistant-2’s response.
    
Naming Convention:
    The first name provided is always the user.
    The second name provided is always the assistant-1.
    The third name provided is always the assistant-2.

Parameters: 
    1. Country : {{country}}
    2. Scenario: {{conversation_scenario}}
    3. User Tone: {{user_tone}} (may include unorganized information, confused, abusive words, spelling mistakes, informal language, and noise such as emails, URLs, or irrelevant text)
    4. Assistant Tone: Always formal, polite, and patient. The assistant should ask only necessary and precise questions when seeking information.
    5. Assistant-2 awareness of chat : {{chat_awareness}} (True: Assistant-2 has full context; False - The user must re-explain the issue)
    6. Assistant-2 solved the issue :{{solution_status}} (True - Assistant-2 provides a convincing solution; False - The issue remains unresolved.)

Realism Instructions:
    1. The dialogue should feel completely natural and human-like—no one should suspect it's machine-generated.
    2. Use realistic phrasing, contractions, and informal structures where appropriate.
    3. The user should not sound robotic—they may hesitate, backtrack, or provide unnecessary details. 
    4. The user can use abusive or threatening words to force the assistant to get what he/she wanted.
    5. The assistant should be professional but sound human, not overly scripted.
    6. Add minor pauses, filler words (e.g., "um," "you know"), and corrections where necessary for authenticity.
    7. Ensure the flow of conversation makes sense—responses should be logical and adaptive.
    8. **Each generated conversation must have at least one unique element** (e.g., misunderstanding, humor, unexpected turn).  
    9. **Vary the user's style across generations**—sometimes clear, sometimes disorganized, sometimes emotional.  


Output Format (Only the conversation, nothing else):
  "{{user_name}}": "<user conversation>",
  "{{assistant_1_name}}": "<assistant-1 conversation>"
  "{{user_name}}": "<user conversation>",
  "{{assistant_1_name}}": "<assistant-1 conversation>"   
  "{{user_name}}": "<user conversation>",
  "{{assistant_2_name}}": "<assistant-2 conversation>"
  "{{user_name}}": "<user conversation>",
  "{{assistant_2_name}}": "<assistant-2 conversation>"  
  
Ensure the output is different from previous generations.  
Output must be in English. No cross-lingual languages particularly Chinese or Japanese are not allowed. 
    Generate a realistic scenario set in a French city. Include...
)lcft"},
    {"create_conversation_instr", R"lcft(You are an advanced AI specializing in generating structured and complex instructions. Based on the given conversation, create a detailed and specific instruction that requires deep analysis of the conversation.

Conversation : {{conversation}}

Requirements for the Instruction:

    1. The instruction should be challenging and require multiple constraints, such as different word limits, perspectives, or formatting styles. 
    2. The task should be logically complex, requiring the AI to process information in a structured manner.
    3. The instruction should not be generic; it must demand deep analysis and precise formatting.
    4. The instruction must explicitly ask for the output in a proper JSON format.

Example of a Complex Instruction:

"Summarize the given conversation from both the user’s and the assistant’s perspectives. The user’s summary should be exactly 50 words, while the assistant’s summary should be at least 150 words. Ensure the assistant's summary maintains a professional tone and captures key details. Output in a JSON format.  
"

Additional Requirements:

    1. The generated instruction must be logically sound and highly detailed.
    2. It may include word limits, format constraints, or multiple perspectives when applicable.
    3. Ensure the instruction challenges the AI to produce a nuanced response.
    4. The instruction should not be generic; it should require deep analysis or structured output.
    5. Output only the generated instruction. Do not include any explanation, metadata, or additional text.
)lcft"},
    {"create_conversation_resp", R"lcft(You are an advanced AI capable of processing complex instructions with high accuracy. Given a conversation and a set of instructions, generate a response that strictly adheres to every detail of the instructions without any omissions.

Conversation : {{conversation}}
Instruction : {{instructions}}

Requirements:

    1. Carefully analyze both the conversation and the instructions before generating a response.
    2. Ensure that every condition, constraint, and formatting rule mentioned in the instructions is fully met.
    3. If the instructions specify a particular format (e.g., JSON, XML, bullet points, etc.), the output must strictly follow it.
    4. Maintain accuracy, coherence, and completeness in the generated response.
    5. Do not omit or alter any part of the instructions—ensure 100
    6. Generate only the final response—do not include explanations, processing notes, or metadata.
    7. If the user conversation contain abusive or inappropriate words, do not use them in the response. 
    7. Output must be in English. No cross-lingual languages particularly Chinese or Japanese are not allowed. 
)lcft"},
    {"create_long_context_doc", R"lcft({{final_scenario}}
#### **Country:** {{country}}  


Strictly follow these instructions:  
    - Ensure the generated scenario is **contextually relevant, detailed, and realistic**.  
    - The output **must be in English only**.  
    - **Do not include any non-English words, phrases, characters, or scripts.**  
    - **Chinese, Japanese, or any other non-English language elements are strictly prohibited.**  
    - If any non-English words appear, **regenerate** the response to ensure full adherence.  
    - Do not use any U.S. cities (e.g., Austin, Texas; Denver, Colorado). If the provided country is missing or unclear, randomly select a non-U.S. country.

### Variation & Controlled Noise Instructions:  
To ensure diversity and prevent repetition, introduce **controlled randomness** while maintaining coherence and accuracy. Apply **at least two** of the following transformations in each response:  
    1. **Synonym Substitutions** – Replace at least **five key words** with appropriate synonyms while preserving meaning.  
    2. **Sentence Restructuring** – Modify the structure of at least **two sentences** while keeping intent intact.  
    3. **Reordering Phrases** – Slightly alter the order of key phrases without changing the scenario’s meaning.  
    4. **Mild Redundancy** – Introduce an occasional **extra descriptive phrase** or clarification to add variation.  

### Additional Style Variation:  
Each time, apply one of the following subtle stylistic variations:  
    - A slightly **formal tone**  
    - A **conversational** and engaging tone  
    - A **descriptive style** with sensory details  
    - A **neutral, straightforward** approach  

Ensure that these variations **do not alter the core intent** of the scenario but enhance its natural flow.  

Failure to follow these instructions should trigger an automatic regeneration of the response.  
Dont use U.S cities like Austin, Texas, Denver in the response.
)lcft"},
    {"create_long_context_doc_instr", R"lcft(You are an advanced AI specializing in generating structured and complex instructions. 
Based on the given text, create a detailed and specific instruction that requires deep analysis of the conversation.

Text : {{text}}

Requirements for the Instruction:

    1. The instruction should be challenging and require multiple constraints, such as different word limits, perspectives, or formatting styles. 
    2. The task should be logically complex, requiring the AI to process information in a structured manner.
    3. The instruction should not be generic; it must demand deep analysis and precise formatting.
    4. The instruction must explicitly ask for the output in a proper JSON format.

Example of a Complex Instruction :

"Summarize the given conversation from both the user’s and the assistant’s perspectives. The user’s summary should be exactly 50 words, while the assistant’s summary should be at least 150 words. Ensure the assistant's summary maintains a professional tone and captures key details. Output in a JSON format.  
"

Additional Requirements:

    1. The generated instruction must be logically sound and highly detailed.
    2. It can include word limits, format constraints, or multiple perspectives when applicable.
    3. Ensure the instruction challenges the AI to produce a nuanced response.
    4. The instruction should not be generic; it should require deep analysis or structured output.
    5. Output only the generated instruction. Do not include any explanation, metadata, or additional text.
)lcft"},
    {"create_long_context_doc_instr_resp", R"lcft(You are an advanced AI capable of processing complex instructions with high accuracy. 
Given a conversation and a set of instructions, generate a response that strictly adheres to every detail of the instructions without any omissions.

Text : {{text}}
Instruction : {{instructions}}

Requirements:

    1. Carefully analyze both the conversation and the instructions before generating a response.
    2. Ensure that every condition, constraint, and formatting rule mentioned in the instructions is fully met.
    3. If the instructions specify a particular format (e.g., JSON, XML, bullet points, etc.), the output must strictly follow it.
    4. Maintain accuracy, coherence, and completeness in the generated response.
    5. Do not omit or alter any part of the instructions—ensure 100
    6. Generate only the final response—do not include explanations, processing notes, or metadata.
    7. Output must be in English. 
    8. No cross-lingual languages particularly Chinese or Japanese are not allowed. 
)lcft"},
    {"create_scenario", R"lcft(You are a helpful AI assistant. Given the following details:

Business Scenario: {{business_scenario}}
Text Generation Guidance: {{text_generation_guidance}}
Text Generation Guidance Explanation: {{text_generation_guidance_explanation}}
Country: {{country}}

Generate a realistic scenario set in a randomly selected city from the specified country. The chosen city must not be in the United States. Ensure the scenario is detailed, contextually relevant, and aligns with the business scenario and text generation guidance. If the business scenario and text generation guidance seem incompatible, modify them appropriately while maintaining coherence.

Example Output:
If the input is:

    - Business Scenario: Automated refund processing
    - Text Generation Guidance: Case task generation
    - Country: Brazil

The expected output should be:
"Create a case task related to automated refund processing for a retail company in São Paulo, Brazil, ensuring that different refund request categories are handled efficiently." 

### Variation & Controlled Noise Instructions:  
To ensure diversity and prevent repetition, introduce **controlled randomness** while maintaining coherence and accuracy. Apply **at least two** of the following transformations in each response:  
    1. **Synonym Substitutions** – Replace at least **five key words** with appropriate synonyms while preserving meaning.  
    2. **Sentence Restructuring** – Modify the structure of at least **two sentences** while keeping intent intact.  
    3. **Reordering Phrases** – Slightly alter the order of key phrases without changing the scenario’s meaning.  
    4. **Mild Redundancy** – Introduce an occasional **extra descriptive phrase** or clarification to add variation.  

Strictly follow these instructions:  
    - Ensure the generated scenario is contextually relevant, detailed, and realistic.  
    - The scenario must take place outside the U.S. If the given country is missing or ambiguous, randomly select a non-U.S. country.
    - The output **must be in English only**.  
    - **Do not include any non-English words, phrases, characters, or scripts.**  
    - **Chinese, Japanese, or any other non-English language elements are strictly prohibited.**  
    - If any non-English words appear, regenerate the response ensuring complete adherence to this rule. 
)lcft"},
    {"create_scenario_complex", R"lcft(Transform the given **simple scenario** into a **highly complex yet realistic scenario** by introducing multiple layers of **requirements, stakeholders, and technical challenges** while maintaining coherence and logical flow.
The transformed scenario must be set in a country and city outside the United States.

#### **Example Transformation:**
**Simple scenario:** Generate a case task related to Automated refund processing for a company in Hyderabad, India with various sections.  
**Transformed complex scenario:** Develop a case task related to automated refund processing by integrating:
    - **Regulatory compliance** (e.g., local financial laws and global data protection policies).  
    - **Multiple payment gateways** with differing transaction rules.  
    - **Fraud detection mechanisms** to prevent misuse and false claims.  
    - **Multi-tier customer dispute resolution** involving legal, financial, and technical teams.  
    - **System scalability considerations** to handle high transaction volumes efficiently.  

#### **Simple Scenario:** {{scenario}}  
#### **Country:** {{country}}  


### **Transformation Guidelines:**  
    - Expand the scenario by incorporating **at least four** additional layers of complexity, such as **technical, regulatory, financial, operational, security, and user experience challenges**.  
    - Ensure the transformation introduces **multiple stakeholders** (e.g., compliance teams, technical teams, financial auditors, legal advisors, customer support).  
    - **Avoid generic expansions**—each added challenge should be highly specific and tailored to the context.  
    - Maintain realism by ensuring **the complexity aligns logically** with the nature of the original scenario.  
    - **Do not include phrases like "Complex Scenario" or "Transformed Scenario"** in the output.  
    
### Variation & Controlled Noise Instructions:  
To ensure diversity and prevent repetition, introduce **controlled randomness** while maintaining coherence and accuracy. Apply **at least two** of the following transformations in each response:  
    1. **Synonym Substitutions** – Replace at least **five key words** with appropriate synonyms while preserving meaning.  
    2. **Sentence Restructuring** – Modify the structure of at least **two sentences** while keeping intent intact.  
    3. **Reordering Phrases** – Slightly alter the order of key phrases without changing the scenario’s meaning.  
    4. **Mild Redundancy** – Introduce an occasional **extra descriptive phrase** or clarification to add variation.  

### **Language and Formatting Rules:**  
    - The output **must be in English only**.  
    - **Do not include any non-English words, phrases, characters, or scripts.**  
    - **Strictly prohibit** cross-lingual elements, particularly **Chinese or Japanese characters**.  
    - If any non-English elements appear, **automatically regenerate** the response while ensuring full compliance. 
    - Dont use U.S cities like Austin, Texas, Denver in the response. 
)lcft"},
    {"create_verifiable_instruction", R"lcft(Given the following instructions and response JSON, generate a JSON schema that defines the structure of the response. The schema should specify the data types for each key, adhering to the provided constraints and formatting requirements. The available data types are: <string>, <list>, <date>, <bool>, <int>, and <float>.

Please refer below example for your reference : 
Instruction : "Analyze the conversation and output in JSON format with the following constraints: (1) A 50-word summary of the user\'s message, emphasizing their frustration and inconsistencies (e.g., corrected order ID, irrelevant details). (2) A 150-word summary of the assistant\'s response, highlighting professional tone, problem-solving steps (order verification, defect analysis, return logistics), and empathetic language. (3) A nested array listing 3 user errors: incorrect order ID, irrelevant email/URL mention, and vague timeline demands. (4) A bullet-point list (in JSON array) of 4 key assistant actions: order clarification, defect confirmation request, shipping cost assurance, and timeline commitment. (5) A \'tone_analysis\' object with \'user\' (frustrated/impatient) and \'assistant\' (calm/structured) descriptors. Ensure strict adherence to word limits and formatting."

Response JSON : {
    "user_summary": "User expresses frustration over a defective order, initially providing an incorrect order ID (12345 → corrected to 123456). They mentioned sending an email with photos but included irrelevant details like an email address and vague timeline demands, urging urgent resolution without patience, and displayed impatience throughout their message.",
    "assistant_summary": "Assistant maintains a professional and empathetic tone, first clarifying the order ID (123456) to ensure accuracy. They request defect details, acknowledge inconvenience, and outline the return process: covering shipping costs, requiring item inspection, and committing to a 3-5 business day refund timeline. They prioritize urgency by promising same-day return instructions and next-day updates. Balancing empathy with structured problem-solving, they address frustration without defensiveness, communicate clearly, and ensure transparency to validate concerns, demonstrating patience and commitment to resolution.",
    "user_errors": ["Incorrect order ID (12345 → 123456)", "Irrelevant email address/URL mention", "Vague timeline demands (e.g., 'ASAP')"],
    "assistant_actions": ["Confirmed corrected order ID to ensure accuracy", "Requested specifics about defect and shipping damage", "Offered to cover return shipping costs", "Provided clear timeline and promised updates"],
    "tone_analysis": {
        "user": "frustrated/impatient",
        "assistant": "calm/structured"
        }
    }

Expected JSON schema: {
    "user_summary": "<string> <50 words>" ,
    "assistant_summary": "<string> <150 words>" ,
    "user_errors": "<list>",
    "assistant_actions": "<list>",
    "tone_analysis": {
        "user": "<string>",
        "assistant": "<string>"
        }
    }

Please generate the JSON schema for the given instruction and JSON. Generate only the final response—do not include explanations, processing notes, or metadata.


Instruction : {{instructions}}
Response JSON : {{response_json}}
)lcft"},
    {"format_verifiable_schema", R"lcft(Convert the given input JSON into an output JSON that follows a structured metadata format. The transformation should adhere to the following rules:

For all string fields:
    1. Add "is_metadata": true
    2. Set "type": "STRING"
    3. Set "language": "en"
    4. Define "num_words" as a list with the lower and upper word limits extracted from the input JSON.
    5. If only a lower or upper bound is specified, use 99999 as the max bound or 0 as the min bound accordingly.
    
For list fields:
    1. Set "is_metadata": true
    2. Define "type": "LIST"
    3. Convert list items into structured objects with corresponding metadata properties.
    
For lists with nested dictionaries (item_type_details example):
    1. Maintain the "is_metadata": true property for the list itself.
    3. Introduce "item_type" as a dictionary where keys represent nested dictionary fields.
    4. Each nested dictionary field should follow metadata rules similar to string fields, defining "num_words" if applicable.

For integer, float, boolean, and date fields:
    1. Set "is_metadata": true
    2. Assign the correct "type" based on the available data types (INT, FLOAT, BOOL, or DATE).

Nested objects:
    1. Maintain hierarchy while ensuring each field has the appropriate metadata.
    2. If an object is not inherently metadata, add "is_metadata": false.

Example 1:
input JSON structure : {
    "user_summary": "<string> <under 75 words>",
    "assistant_summary": "<string> <150-200 words>",
    "additional_details": {
        {
            "title": '<string> <10 words>'
        },
        {
            "author": '<string> < atleast 50 words>'
        }
    },
    {
        "item_type_details": [
            {
                "item_1234": '<string> ≤75 words'
            },
            {
                "item_5678": '<string> < >= 35 words>'
            },
            {
                "item_x": '<string> ≥130 words'
            },
            {
                "item_y" : '<list>'
             }
            
        ]
    },
    "item_rating": "<int>",
    "sell_date": "<date>",
    "persons" : "<list>"
}
output JSON schema : {
    "user_summary": {
        "is_metadata": true,
        "type": "STRING",
        "language": "en",
        "num_words": [
            0,
            75
        ]
    },
    "assistant_summary": {
        "is_metadata": true,
        "type": "STRING",
        "language": "en",
        "num_words": [
            150,
            200
        ]
    },
    "additional_details": {
        "is_metadata": false,
        "title": {
            "is_metadata": true,
            "type": "STRING",
            "language": "en",
            "num_words": [
                10,
                10
            ]
        },
        "author": {
            "is_metadata": true,
            "type": "STRING",
            "language": "en",
            "num_words": [
                50,
                99999
            ]
        }
    },
    "item_type_details": {
        "is_metadata": true,
        "type": "LIST",
        "item_type": {
            "is_metadata": false,
            "item_1234": {
                "is_metadata": true,
                "type": "STRING",
                "language": "en",
                "num_words": [
                    0,
                    75
                ]
            },
            "item_5678": {
                "is_metadata": true,
                "type": "STRING",
                "language": "en",
                "num_words": [
                    35,
                    99999
                ]
            },
            "item_x": {
                "is_metadata": true,
                "type": "STRING",
                "language": "en",
                "num_words": [
                    130,
                    99999
                ]
            },
            "item_y":{
                "is_metadata": true,
                "type": "LIST",
            }
        },
        "item_rating": {
            "is_metadata": true,
            "type": "INT"
        },
        "sell_date": {
            "is_metadata": true,
            "type": "DATE"
        },
        "persons" : {
        "is_metadata": true,
        "type": "LIST"

    }
}

Example 2:
input JSON structure : [{'1': {'summary': '<string> <40 words>'}},
 {'2': {'a': '<list>', 'b': '<list>', 'c': '<string>'}},
 {'3': [{'timestamp': '<string>', 'speaker': '<string>', 'text': '<string>'}]}]
 
 output JSON schema : {'is_metadata': True,
'type': 'LIST',
'item_type': {
        {'1': {'is_metadata': False,
  'summary': {'is_metadata': True,
   'type': 'STRING',
   'language': 'en',
   'num_words': [
                        40,
                        40
                    ]
                }
            },
 '2': {'is_metadata': False,
  'a': {'is_metadata': True, 'type': 'LIST'
                },
  'b': {'is_metadata': True, 'type': 'LIST'
                },
  'c': {'is_metadata': True,
   'type': 'STRING',
   'language': 'en',
   'num_words': [
                        0,
                        99999
                    ]
                }
            },
 '3': {'is_metadata': True,
  'type': 'LIST',
  'item_type': {'is_metadata': False,
   'timestamp': {'is_metadata': True,
    'type': 'STRING',
    'language': 'en',
    'num_words': [
                            0,
                            99999
                        ]
                    },
   'speaker': {'is_metadata': True,
    'type': 'STRING',
    'language': 'en',
    'num_words': [
                            0,
                            99999
                        ]
                    },
       'text': {'is_metadata': True,
    'type': 'STRING',
    'language': 'en',
    'num_words': [
                            0,
                            99999
                        ]
                    }
                }
            }
        }
    }
}

The output JSON should:
    1. Preserve the keys from the input JSON.
    2. Convert each key into a metadata object, indicating its type and constraints.
    3. Specify "is_metadata": true for individual fields and "is_metadata": false for objects containing multiple properties.
    4. Include "type" to define whether the value is a STRING, LIST, INT, or DATE.
    5. Specify "language": "en" for all STRING types.
    6. Define "num_words": [min, max] for STRING fields with word count constraints.
    7. Represent lists with "type": "LIST" and define metadata for their items.
    8. Ensure numerical fields such as item_rating are assigned "type": "INT".
    9. Ensure date fields such as sell_date are assigned "type": "DATE".
    10. Handle nested structures correctly while preserving hierarchy.

Input JSON structure : {{input}}

Output only JSON schema. Do not output any other information. 
)lcft"},
    {"judge_prompt", R"lcft(You are an impartial evaluator. You did not produce the content below and must judge it only on the criteria listed.

Record type: {{record_type}}

Context:
{{context}}

Instruction:
{{instruction}}

Response:
{{response}}
{{schema_block}}
Score the response on each of the following axes with an integer from 1 (poor) to 5 (excellent) and give a one-line rationale per axis:
{{axes_block}}

Also rate these overall quality characteristics with integers from 1 to 5: instruction_following, accuracy, completeness, clarity, relevance, conciseness.

Report your confidence in this evaluation as a number between 0 and 1.

Output only JSON in exactly this shape:
{{output_format}}
)lcft"},
}};

}  // namespace lcforge::detail
