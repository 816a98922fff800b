#!/usr/bin/env python3
# Copyright 2026 The DialogForge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the template customer-service bot and its held-out utterances.

Training utterances are sampled from template combinations per intent.
Held-out utterances come from the remaining combinations with words
swapped for the synonyms real users (and the rule-based paraphraser) use.

    python3 tools/fixtures/make_template_bot.py data/fixtures
"""

import itertools
import json
import pathlib
import random
import sys

SEED = 20260418
TRAIN_PER_INTENT = 150
EVAL_PER_INTENT = 100

# Frames are expanded over every combination of their slot lists.
INTENTS = {
    "Transfer_To_Agent": {
        "dialog": "Transfer_To_Agent",
        "frames": [
            ("{lead}{verb} {obj}{tail}", {
                "lead": ["", "i want to ", "i would like to ", "can i ", "let me ", "i need to "],
                "verb": ["talk to", "speak with", "speak to", "chat with", "be connected to", "be transferred to"],
                "obj": ["an agent", "a live agent", "a human agent", "a real agent", "a support agent",
                        "an agent from support", "customer service agent", "your agent"],
                "tail": ["", " please", " now", " right away", " as soon as possible"],
            }),
            ("{obj}{tail}", {
                "obj": ["agent", "live agent", "human agent", "transfer me to an agent", "connect me to an agent",
                        "get me an agent", "i want an agent", "put me through to an agent"],
                "tail": ["", " please", " now", " right away"],
            }),
        ],
    },
    "End_Chat": {
        "dialog": "End_Chat_Survey",
        "frames": [
            ("{lead}{verb} {obj}{tail}", {
                "lead": ["", "i want to ", "please ", "can we ", "let's ", "i would like to "],
                "verb": ["end", "close", "finish", "stop", "quit"],
                "obj": ["this chat", "the chat", "our chat", "this conversation", "the conversation"],
                "tail": ["", " now", ", thanks", ", i am done", ", bye"],
            }),
            ("{obj}{tail}", {
                "obj": ["bye", "goodbye", "that is all", "i am done", "nothing else", "we are done here",
                        "no more questions"],
                "tail": ["", " thanks", ", end the chat", ", close the chat"],
            }),
        ],
    },
    "Connect_With_Sales": {
        "dialog": "Connect_With_Sales",
        "frames": [
            ("{lead}{verb} {obj}{tail}", {
                "lead": ["", "i want to ", "i would like to ", "can i ", "i need to "],
                "verb": ["talk to", "speak with", "get in touch with", "contact", "reach"],
                "obj": ["sales", "the sales team", "a sales representative", "someone in sales",
                        "your sales department"],
                "tail": ["", " please", " about pricing", " about a new plan"],
            }),
            ("{lead}{verb} {product}{tail}", {
                "lead": ["", "i want to ", "i would like to ", "can i ", "i need to "],
                "verb": ["buy", "get pricing for", "get a quote for", "upgrade to", "purchase", "sign up for"],
                "product": ["a new plan", "the enterprise plan", "your product", "more licenses", "a subscription"],
                "tail": ["", " please", " for my team"],
            }),
        ],
    },
    "Check_Issue_Status": {
        "dialog": "Check_Issue_Status",
        "frames": [
            ("{lead}{verb} {thing}{tail}", {
                "lead": ["", "i want to ", "can you ", "i need to ", "please "],
                "verb": ["check the status of my", "get an update on my", "follow up on my", "check on my",
                         "see the status of my"],
                "thing": ["issue", "case", "ticket", "support case", "existing issue", "open ticket",
                          "reported issue"],
                "tail": ["", " please", " from last week"],
            }),
            ("{ask} {thing}{tail}", {
                "ask": ["what is the status of my", "any update on my", "is there news on my",
                        "has anyone looked at my"],
                "thing": ["issue", "case", "ticket", "support case", "existing issue", "open ticket"],
                "tail": ["", "?", " yet"],
            }),
        ],
    },
    "Check_Order_Status": {
        "dialog": "Check_Order_Status",
        "frames": [
            ("{lead}{verb} {thing}{tail}", {
                "lead": ["", "i want to ", "can you ", "i need to ", "please "],
                "verb": ["check the status of my", "track my", "get an update on my", "check on my",
                         "see the status of my"],
                "thing": ["order", "recent order", "delivery", "online order", "last order", "shipment"],
                "tail": ["", " please", " from last week"],
            }),
            ("{ask} {thing}{tail}", {
                "ask": ["where is my", "when will i get my", "has my", "when does my"],
                "thing": ["order", "recent order", "delivery", "online order", "last order"],
                "tail": ["", "?", " arrive", " ship"],
            }),
        ],
    },
    "Report_Issue": {
        "dialog": "Report_Issue",
        "frames": [
            ("{lead}{verb} {thing}{tail}", {
                "lead": ["", "i want to ", "i need to ", "can i ", "i would like to "],
                "verb": ["report", "open", "create", "log", "submit"],
                "thing": ["an issue", "a new issue", "a bug", "a new case", "a defect", "an error", "a problem"],
                "tail": ["", " please", " with my account", " with the app"],
            }),
            ("{thing} {verb}{tail}", {
                "thing": ["my account", "the app", "the website", "my device", "the login page", "checkout"],
                "verb": ["is broken", "is not working", "keeps crashing", "shows an error", "has a bug"],
                "tail": ["", ", please help", ", i need help"],
            }),
        ],
    },
}

# Single-word swaps used for held-out utterances; a subset of the
# paraphraser's bundled lexicon.
SYNONYMS = {
    "agent": ["representative", "human", "person", "operator"],
    "chat": ["conversation", "session", "talk"],
    "check": ["verify", "see", "track"],
    "end": ["finish", "stop", "close", "terminate"],
    "issue": ["problem", "case", "ticket", "complaint"],
    "order": ["purchase", "package", "shipment"],
    "status": ["progress", "state", "update"],
    "report": ["file", "log", "submit", "raise"],
    "sales": ["salespeople"],
    "talk": ["speak", "chat"],
    "speak": ["talk", "chat"],
    "buy": ["purchase", "order", "get"],
    "product": ["item", "plan", "package"],
    "case": ["ticket", "issue"],
    "ticket": ["case", "request"],
    "error": ["bug", "fault", "glitch"],
    "bug": ["glitch", "defect", "error"],
    "existing": ["open", "current", "previous"],
    "delivery": ["shipping", "shipment", "arrival"],
    "broken": ["faulty", "damaged"],
    "want": ["need"],
    "need": ["want", "require"],
}


def expand(frame, slots):
    keys = sorted(slots)
    for values in itertools.product(*(slots[k] for k in keys)):
        yield frame.format(**dict(zip(keys, values)))


def swap(utterance, rng, rate):
    words = utterance.split(" ")
    out = []
    for w in words:
        core = w.strip("?,.")
        if core in SYNONYMS and rng.random() < rate:
            w = w.replace(core, rng.choice(SYNONYMS[core]))
        out.append(w)
    return " ".join(out)


def utterances(rng):
    train, held_out = {}, {}
    for intent, spec in INTENTS.items():
        pool = []
        for frame, slots in spec["frames"]:
            pool.extend(expand(frame, slots))
        pool = sorted(set(pool))
        rng.shuffle(pool)
        train[intent] = pool[:TRAIN_PER_INTENT]
        seen = {u for u in train[intent]}
        evals = []
        for u in pool[TRAIN_PER_INTENT:]:
            v = swap(u, rng, 0.6)
            if v not in seen:
                seen.add(v)
                evals.append(v)
            if len(evals) == EVAL_PER_INTENT:
                break
        held_out[intent] = evals
    return train, held_out


def dialogs():
    end_chat = "End_Chat"
    return [
        {"name": "Transfer_To_Agent", "steps": [
            {"text": "I can connect you with one of our support agents.", "action": "Say"},
            {"text": "May I get your email address so an agent can follow up?", "action": "Collect",
             "slot": "Email", "entity_type": "Email"},
            {"text": "Thanks, an agent will reach out to {Email} shortly.", "action": "Say"},
        ], "transitions": [{"target": end_chat, "condition": "always"}]},
        {"name": "End_Chat_Survey", "steps": [
            {"text": "Sure, before you go we would love your feedback.", "action": "Say"},
            {"text": "On a scale from 1 to 10, how would you rate this chat?", "action": "Collect",
             "slot": "FeedbackScore", "entity_type": "FeedbackScore"},
        ], "transitions": [{"target": end_chat, "condition": "always"}]},
        {"name": "Connect_With_Sales", "steps": [
            {"text": "Great, our sales team would be happy to help you.", "action": "Say"},
            {"text": "What email address should our sales team use?", "action": "Collect",
             "slot": "Email", "entity_type": "Email"},
            {"text": "Which plan are you interested in: Starter, Professional or Enterprise?",
             "action": "Collect", "slot": "ProductInterest", "entity_type": "ProductInterest"},
        ], "transitions": [{"target": end_chat, "condition": "always"}]},
        {"name": "Check_Issue_Status", "steps": [
            {"text": "Let me look up the status of your case.", "action": "Say"},
        ], "transitions": [{"target": "Case_Lookup", "condition": "always"}]},
        {"name": "Case_Lookup", "is_sub_dialog": True, "steps": [
            {"text": "What is the email address on the case?", "action": "Collect",
             "slot": "Email", "entity_type": "Email"},
            {"text": "Please enter your case number.", "action": "Collect",
             "slot": "CaseNumber", "entity_type": "CaseNumber"},
            {"text": "Your case {CaseNumber} is currently {status}.", "action": "Say"},
        ], "transitions": [{"target": end_chat, "condition": "always"}]},
        {"name": "Check_Order_Status", "steps": [
            {"text": "I can help you track your order.", "action": "Say"},
            {"text": "What is your order number?", "action": "Collect",
             "slot": "OrderNumber", "entity_type": "OrderNumber"},
            {"text": "Order {OrderNumber} is on its way.", "action": "Say"},
        ], "transitions": [{"target": end_chat, "condition": "always"}]},
        {"name": "Report_Issue", "steps": [
            {"text": "I am sorry you ran into a problem. Let's open a new case.", "action": "Say"},
            {"text": "What email address can we reach you at?", "action": "Collect",
             "slot": "Email", "entity_type": "Email"},
            {"text": "Please describe the issue in a few words.", "action": "Collect",
             "slot": "IssueDescription", "entity_type": "IssueDescription"},
            {"text": "Shall I submit this case for you?", "action": "Confirm",
             "slot": "IssueDescription", "entity_type": "IssueDescription"},
        ], "transitions": [{"target": end_chat, "condition": "on_success"},
                           {"target": "Transfer_To_Agent", "condition": "on_failure"}]},
        {"name": end_chat, "steps": [
            {"text": "Thanks for chatting with us. Goodbye!", "action": "Say"},
        ], "transitions": []},
    ]


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    train, held_out = utterances(rng)
    bot = {
        "schema_version": 1,
        "name": "template_bot",
        "dialogs": dialogs(),
        "intents": [{"name": name, "entry_dialog": spec["dialog"], "training_utterances": train[name]}
                    for name, spec in INTENTS.items()],
        "entities": [
            {"name": "Email", "kind": "email"},
            {"name": "FeedbackScore", "kind": "number"},
            {"name": "ProductInterest", "kind": "enumeration", "values": ["Starter", "Professional", "Enterprise"]},
            {"name": "CaseNumber", "kind": "alphanumeric_id"},
            {"name": "OrderNumber", "kind": "number"},
            {"name": "IssueDescription", "kind": "free_text"},
        ],
        "success_dialogs": ["End_Chat"],
    }
    (out / "template_bot.json").write_text(json.dumps(bot, indent=2) + "\n")
    (out / "eval_utterances.json").write_text(json.dumps(held_out, indent=2) + "\n")


if __name__ == "__main__":
    main()
