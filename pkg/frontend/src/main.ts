import { HttpClient } from "./client.js";
import { Editor } from "./editor.js";
import { mount } from "./view.js";

const base = new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:8777";
const editor = new Editor(new HttpClient(base));
mount(document.getElementById("app") as HTMLElement, editor);
