package de.example.app;

import de.example.api.Foo;
import de.example.api.Bar;
import de.example.api.Baz;

public class Client {
    void handle(Foo foo, Bar bar, Baz baz) {
        Object bazObj = new Object(foo, bar);
        baz.register(bazObj);
        if (bazObj.hasCharacteristic()) {
            baz.doSomething(bazObj.describe());
            return;
        }
    }
}
